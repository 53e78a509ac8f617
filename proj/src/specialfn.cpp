#include "pmeans/specialfn.hpp"

#include "pmeans/detail/compensated_sum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace pmeans {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using detail::CompensatedSum;

constexpr double kEulerGamma = 0.57721566490153286061;

// zeta(k) for k = 2..40.
constexpr std::array<double, 39> kZeta = {
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915,
    1.0369277551433699263, 1.0173430619844491397, 1.0083492773819228268,
    1.0040773561979443394, 1.0020083928260822144, 1.0009945751278180853,
    1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519,
    1.0000076371976378998, 1.0000038172932649998, 1.0000019082127165539,
    1.0000009539620338728, 1.0000004769329867878, 1.0000002384505027277,
    1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
    1.0000000149015548284, 1.0000000074507117898, 1.0000000037253340248,
    1.0000000018626597235, 1.0000000009313274324, 1.0000000004656629065,
    1.0000000002328311834, 1.0000000001164155017, 1.0000000000582077209,
    1.0000000000291038504, 1.0000000000145519219, 1.0000000000072759598,
    1.0000000000036379795, 1.0000000000018189897, 1.0000000000009094948,
};

// ln Gamma(1 + z) = -gamma z + sum_{k>=2} zeta(k) (-z)^k / k, |z| <= 0.2.
double log_gamma_1p_series(double z) {
  double power = -z;
  CompensatedSum acc;
  acc.add(-kEulerGamma * z);
  for (std::size_t i = 0; i < kZeta.size(); ++i) {
    const double k = static_cast<double>(i + 2);
    power *= -z;
    acc.add(kZeta[i] * power / k);
  }
  return acc.value();
}

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

double log_gamma_lanczos(double x) {
  const double xm1 = x - 1.0;
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    a += kLanczos[i] / (xm1 + static_cast<double>(i));
  }
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
         std::log(a);
}

void require_alpha_open(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error(std::string(who) + ": alpha must lie in (0,1)");
  }
}

}  // namespace

void SeriesControl::validate() const {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("SeriesControl: abs_tol must be > 0");
  if (max_terms < 1) throw std::invalid_argument("SeriesControl: max_terms must be >= 1");
  if (!(max_abs_argument > 0.0)) {
    throw std::invalid_argument("SeriesControl: max_abs_argument must be > 0");
  }
}

double sin_pi(double x) {
  const double r = std::remainder(x, 2.0);  // in [-1, 1]
  if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(std::numbers::pi * r);
}

double cos_pi(double x) {
  const double r = std::remainder(x, 2.0);
  if (std::abs(r) == 0.5) return 0.0;
  if (r == 0.0) return 1.0;
  if (std::abs(r) == 1.0) return -1.0;
  return std::cos(std::numbers::pi * r);
}

double log_gamma(double x) {
  if (!(x > 0.0) || std::isinf(x)) {
    throw std::domain_error("log_gamma: argument must be a finite positive real");
  }
  if (x == 1.0 || x == 2.0) return 0.0;
  if (std::abs(x - 1.0) <= 0.2) return log_gamma_1p_series(x - 1.0);
  if (std::abs(x - 2.0) <= 0.2) {
    const double z = x - 2.0;
    return log_gamma_1p_series(z) + std::log1p(z);
  }
  if (x < 0.5) {
    // reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    return std::log(std::numbers::pi / sin_pi(x)) - log_gamma(1.0 - x);
  }
  return log_gamma_lanczos(x);
}

double pochhammer(double theta, std::size_t n) {
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) p *= theta + static_cast<double>(i);
  return p;
}

double mittag_leffler(double alpha, double z, const SeriesControl& ctl) {
  ctl.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("mittag_leffler: alpha must lie in (0,1]");
  }
  if (z == 0.0) return 1.0;
  if (!(std::abs(z) <= ctl.max_abs_argument)) {
    throw std::domain_error("mittag_leffler: |z| exceeds the configured series radius");
  }
  const double log_abs_z = std::log(std::abs(z));
  const bool negative = z < 0.0;

  // log |k-th term|
  auto log_mag = [&](std::size_t k) {
    const double kd = static_cast<double>(k);
    return kd * log_abs_z - log_gamma(kd * alpha + 1.0);
  };

  CompensatedSum acc;
  double rounding = 0.0;
  for (std::size_t k = 0; k < ctl.max_terms; ++k) {
    const double lm = log_mag(k);
    const double mag = std::exp(lm);
    const double term = (negative && (k % 2 == 1)) ? -mag : mag;
    acc.add(term);
    const double kd = static_cast<double>(k);
    rounding += mag * kEps * (1.0 + std::abs(kd * log_abs_z) + std::abs(lm));

    // Consecutive-term ratios |z| Gamma(k a + 1) / Gamma((k+1) a + 1) decrease
    // in k, so once one falls below 1 the tail is bounded geometrically.
    const double next = std::exp(log_mag(k + 1));
    const double rho = std::exp(log_mag(k + 2) - log_mag(k + 1));
    if (rho < 1.0 && next < mag) {
      const double tail = next / (1.0 - rho);
      if (tail < 0.5 * ctl.abs_tol) {
        if (rounding > ctl.abs_tol) {
          throw NonConvergence("mittag_leffler: cancellation exceeds abs_tol; |z| too large");
        }
        return acc.value();
      }
    }
  }
  throw NonConvergence("mittag_leffler: max_terms exhausted before abs_tol was met");
}

double stable_pdf(double alpha, double t, const SeriesControl& ctl) {
  ctl.validate();
  require_alpha_open(alpha, "stable_pdf");
  if (!(t > 0.0)) throw std::domain_error("stable_pdf: t must be > 0");

  const double log_t = std::log(t);
  // log of Gamma(k a + 1) / (k! t^{k a + 1})
  auto log_bound = [&](std::size_t k) {
    const double kd = static_cast<double>(k);
    return log_gamma(kd * alpha + 1.0) - log_gamma(kd + 1.0) - (kd * alpha + 1.0) * log_t;
  };

  CompensatedSum acc;
  double rounding = 0.0;
  double prev_rho = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= ctl.max_terms; ++k) {
    const double lb = log_bound(k);
    const double bound = std::exp(lb) / std::numbers::pi;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    acc.add(sign * sin_pi(alpha * static_cast<double>(k)) * bound);
    rounding += bound * kEps * (1.0 + std::abs(lb));

    const double lnext = log_bound(k + 1);
    const double rho = std::exp(log_bound(k + 2) - lnext);
    if (rho < 1.0 && rho <= prev_rho) {
      const double tail = std::exp(lnext) / std::numbers::pi / (1.0 - rho);
      if (tail < 0.5 * ctl.abs_tol) {
        if (rounding > ctl.abs_tol) {
          throw NonConvergence("stable_pdf: cancellation exceeds abs_tol; t too small");
        }
        return std::max(0.0, acc.value());
      }
    }
    prev_rho = rho;
  }
  throw NonConvergence("stable_pdf: max_terms exhausted; t too small for the series");
}

double talzol_pdf(double alpha, double s) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::domain_error("talzol_pdf: alpha must lie in [0,1)");
  }
  if (alpha == 0.0) {
    const double c = std::cosh(0.5 * s);
    return 1.0 / (4.0 * c * c);
  }
  return sin_pi(alpha) / (2.0 * std::numbers::pi * alpha * (cos_pi(alpha) + std::cosh(s)));
}

double stable_ratio_pdf(double alpha, double r) {
  require_alpha_open(alpha, "stable_ratio_pdf");
  if (!(r > 0.0)) throw std::domain_error("stable_ratio_pdf: r must be > 0");
  const double ra = std::pow(r, alpha);
  return sin_pi(alpha) / std::numbers::pi * std::pow(r, alpha - 1.0) /
         (1.0 + 2.0 * ra * cos_pi(alpha) + ra * ra);
}

double stable_ratio_power_pdf(double alpha, double x) {
  require_alpha_open(alpha, "stable_ratio_power_pdf");
  if (!(x >= 0.0)) throw std::domain_error("stable_ratio_power_pdf: x must be >= 0");
  return sin_pi(alpha) / (alpha * std::numbers::pi) / (1.0 + 2.0 * x * cos_pi(alpha) + x * x);
}

double stable_ratio_power_cdf(double alpha, double x) {
  require_alpha_open(alpha, "stable_ratio_power_cdf");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double s = sin_pi(alpha);
  const double c = cos_pi(alpha);
  const double v = (std::atan((x + c) / s) - std::atan(c / s)) / (alpha * std::numbers::pi);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace pmeans
