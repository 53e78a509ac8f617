#pragma once

#include "pmeans/rng.hpp"

namespace pmeans {

/// Standard gamma(r) variate, density x^{r-1} e^{-x} / Gamma(r).
/// Marsaglia-Tsang squeeze for r >= 1; for r < 1 a gamma(r + 1) draw is
/// scaled by U^{1/r}.
double sample_gamma(double r, RngStream& rng);

/// log of a gamma(r) variate. Stays finite for shapes so small that the
/// variate itself would underflow.
double sample_log_gamma(double r, RngStream& rng);

/// beta(r, s) as gamma(r) / (gamma(r) + gamma'(s)).
double sample_beta(double r, double s, RngStream& rng);

/// beta(r, s) together with its complement 1 - B, each computed without
/// cancellation. s == 0 yields (1, 0).
struct BetaPair {
  double value;
  double complement;
};
BetaPair sample_beta_pair(double r, double s, RngStream& rng);

/// Standard one-sided stable(alpha) variate T with E exp(-lambda T) =
/// exp(-lambda^alpha), by Kanter's representation
///   T = sin(alpha U) / sin(U)^{1/alpha} * (sin((1 - alpha) U) / E)^{(1 - alpha)/alpha}
/// with U uniform on (0, pi) and E unit exponential.
double sample_stable(double alpha, RngStream& rng);

/// log T for the same variate.
double sample_log_stable(double alpha, RngStream& rng);

/// C_alpha = -cos(alpha pi) + sin(alpha pi) C with C standard Cauchy.
double sample_cauchy_alpha(double alpha, RngStream& rng);

/// log C_alpha conditioned on C_alpha > 0 (rejection on the sign).
double sample_talzol(double alpha, RngStream& rng);

/// T_alpha / T'_alpha for independent standard stables.
double sample_stable_ratio(double alpha, RngStream& rng);

}  // namespace pmeans
