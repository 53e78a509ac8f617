#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace pmeans {

/// cos^2(alpha pi) + alpha^2 - 1: half the discriminant of the quadratic
/// (1 + alpha) x^2 + 2 x cos(alpha pi) + 1 - alpha, whose sign fixes the
/// sign of the derivative of the R_alpha density at r = x^{1/alpha}.
double half_discriminant(double alpha);

/// Root of half_discriminant in (0,1), by bisection on [1/2, 1).
double alpha_critical(double tol = 1e-12);

/// Location of the inflection point of the R_alpha density at alpha_critical:
/// (sqrt(1 - a^2) / (1 + a))^{1/a}.
double inflection_abscissa();

struct RatioExtrema {
  double x_minus;
  double x_plus;
  /// local minimum and local maximum of the R_alpha density
  double r_minus;
  double r_plus;
};
/// Roots of the quadratic and their images r = x^{1/alpha}; empty when the
/// discriminant is negative.
std::optional<RatioExtrema> ratio_density_extrema(double alpha);

/// Mode of the R_alpha^alpha density: 0 for alpha <= 1/2, sin((alpha - 1/2) pi) above.
double ratio_power_mode(double alpha);

/// Number of sign changes of the forward differences of the R_alpha density
/// over a log-spaced grid on [r_lo, r_hi].
std::size_t ratio_density_sign_changes(double alpha, double r_lo = 1e-6, double r_hi = 1e6,
                                       std::size_t points = 20001);

struct RatioDensityRow {
  double alpha;
  /// grid abscissa, shared by both densities
  double x;
  double ratio_power_pdf;
  double ratio_pdf;
};
/// Both densities at alpha = k/8, k = 1..7, on a grid of `points` values of
/// x in (0, x_max].
std::vector<RatioDensityRow> ratio_density_table(std::size_t points = 200, double x_max = 3.0);

struct DiscriminantRow {
  double alpha;
  double half_discriminant;
  /// NaN below alpha_critical
  double r_minus;
  double r_plus;
};
std::vector<DiscriminantRow> discriminant_table(std::size_t points = 200);

}  // namespace pmeans
