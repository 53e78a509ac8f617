#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmeans {

/// Raised when a truncated series cannot reach the requested tolerance,
/// either because the term budget ran out or because cancellation between
/// large terms would swamp the result.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncation policy for the Mittag-Leffler and stable-density series.
struct SeriesControl {
  double abs_tol = 1e-12;
  std::size_t max_terms = 2000;
  /// Largest |z| accepted by mittag_leffler; beyond it the power series is
  /// rejected rather than continued asymptotically.
  double max_abs_argument = 8.0;

  void validate() const;
};

/// sin(pi x) and cos(pi x), exact at integer and half-integer x.
double sin_pi(double x);
double cos_pi(double x);

/// ln Gamma(x) for x > 0. Lanczos (g = 7, nine terms) away from the zeros
/// at 1 and 2, zeta series around them.
double log_gamma(double x);

/// Rising factorial (theta)_n = theta (theta + 1) ... (theta + n - 1).
double pochhammer(double theta, std::size_t n);

/// E_alpha(z) = sum_k z^k / Gamma(k alpha + 1), 0 < alpha <= 1.
double mittag_leffler(double alpha, double z, const SeriesControl& ctl = {});

/// Density of the standard one-sided stable(alpha) variable with Laplace
/// transform exp(-lambda^alpha), from Pollard's series in t^{-alpha}.
/// Throws NonConvergence where t is too small for the series.
double stable_pdf(double alpha, double t, const SeriesControl& ctl = {});

/// Talacko-Zolotarev density
///   f_alpha(s) = sin(alpha pi) / (2 pi alpha (cos(alpha pi) + cosh s)),
/// with f_0(s) = 1 / (4 cosh^2(s/2)).
double talzol_pdf(double alpha, double s);

/// Density of R_alpha = T_alpha / T'_alpha for independent standard stables.
double stable_ratio_pdf(double alpha, double r);

/// Density of R_alpha^alpha, the positive part of the shifted Cauchy
/// C_alpha = -cos(alpha pi) + sin(alpha pi) C conditioned to be positive.
double stable_ratio_power_pdf(double alpha, double x);

/// CDF of R_alpha^alpha (closed form via arctan).
double stable_ratio_power_cdf(double alpha, double x);

}  // namespace pmeans
