#include "pmeans/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pmeans/specialfn.hpp"

namespace pmeans {

namespace {

double marsaglia_tsang(double r, RngStream& rng) {
  const double d = r - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

void require_positive_shape(double r, const char* who) {
  if (!(r > 0.0) || std::isinf(r)) {
    throw std::domain_error(std::string(who) + ": shape must be a finite positive real");
  }
}

void require_alpha_open(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error(std::string(who) + ": alpha must lie in (0,1)");
  }
}

}  // namespace

double sample_gamma(double r, RngStream& rng) {
  require_positive_shape(r, "sample_gamma");
  if (r >= 1.0) return marsaglia_tsang(r, rng);
  return std::exp(sample_log_gamma(r, rng));
}

double sample_log_gamma(double r, RngStream& rng) {
  require_positive_shape(r, "sample_log_gamma");
  if (r >= 1.0) return std::log(marsaglia_tsang(r, rng));
  const double g = marsaglia_tsang(r + 1.0, rng);
  return std::log(g) + std::log(rng.uniform()) / r;
}

BetaPair sample_beta_pair(double r, double s, RngStream& rng) {
  require_positive_shape(r, "sample_beta");
  if (s == 0.0) return {1.0, 0.0};
  require_positive_shape(s, "sample_beta");
  if (r == 1.0) {
    // 1 - B = U^{1/s}
    const double l = std::log(rng.uniform()) / s;
    return {-std::expm1(l), std::exp(l)};
  }
  const double la = sample_log_gamma(r, rng);
  const double lb = sample_log_gamma(s, rng);
  // a / (a + b) = 1 / (1 + exp(lb - la))
  const double d = lb - la;
  if (d > 0.0) {
    const double e = std::exp(-d);
    return {e / (1.0 + e), 1.0 / (1.0 + e)};
  }
  const double e = std::exp(d);
  return {1.0 / (1.0 + e), e / (1.0 + e)};
}

double sample_beta(double r, double s, RngStream& rng) {
  if (!(s > 0.0)) require_positive_shape(s, "sample_beta");
  return sample_beta_pair(r, s, rng).value;
}

double sample_log_stable(double alpha, RngStream& rng) {
  require_alpha_open(alpha, "sample_stable");
  const double u = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  return std::log(std::sin(alpha * u)) - std::log(std::sin(u)) / alpha +
         (1.0 - alpha) / alpha * (std::log(std::sin((1.0 - alpha) * u)) - std::log(e));
}

double sample_stable(double alpha, RngStream& rng) {
  return std::exp(sample_log_stable(alpha, rng));
}

double sample_cauchy_alpha(double alpha, RngStream& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::domain_error("sample_cauchy_alpha: alpha must lie in [0,1]");
  }
  const double c = std::tan(std::numbers::pi * (rng.uniform() - 0.5));
  const double s = sin_pi(alpha);
  if (s == 0.0) return -cos_pi(alpha);
  return -cos_pi(alpha) + s * c;
}

double sample_talzol(double alpha, RngStream& rng) {
  require_alpha_open(alpha, "sample_talzol");
  for (;;) {
    const double c = sample_cauchy_alpha(alpha, rng);
    if (c > 0.0) return std::log(c);
  }
}

double sample_stable_ratio(double alpha, RngStream& rng) {
  require_alpha_open(alpha, "sample_stable_ratio");
  const double a = sample_log_stable(alpha, rng);
  const double b = sample_log_stable(alpha, rng);
  return std::exp(a - b);
}

}  // namespace pmeans
