#include "pmeans/figures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pmeans/specialfn.hpp"

namespace pmeans {

double half_discriminant(double alpha) {
  const double c = cos_pi(alpha);
  return c * c + alpha * alpha - 1.0;
}

double alpha_critical(double tol) {
  double lo = 0.5;
  double hi = 1.0;
  // half_discriminant(1/2) = -3/4 < 0 < 1 = half_discriminant(1)
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (half_discriminant(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double inflection_abscissa() {
  const double a = alpha_critical();
  return std::pow(std::sqrt(1.0 - a * a) / (1.0 + a), 1.0 / a);
}

std::optional<RatioExtrema> ratio_density_extrema(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("ratio_density_extrema: alpha must lie in (0,1)");
  }
  const double d = half_discriminant(alpha);
  if (d < 0.0) return std::nullopt;
  const double c = cos_pi(alpha);
  const double s = std::sqrt(d);
  RatioExtrema e{};
  e.x_minus = (-c - s) / (1.0 + alpha);
  e.x_plus = (-c + s) / (1.0 + alpha);
  e.r_minus = std::pow(e.x_minus, 1.0 / alpha);
  e.r_plus = std::pow(e.x_plus, 1.0 / alpha);
  return e;
}

double ratio_power_mode(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("ratio_power_mode: alpha in (0,1)");
  return alpha <= 0.5 ? 0.0 : sin_pi(alpha - 0.5);
}

std::size_t ratio_density_sign_changes(double alpha, double r_lo, double r_hi,
                                       std::size_t points) {
  if (!(r_lo > 0.0 && r_hi > r_lo) || points < 3) {
    throw std::invalid_argument("ratio_density_sign_changes: bad grid");
  }
  const double step = std::log(r_hi / r_lo) / static_cast<double>(points - 1);
  double prev = stable_ratio_pdf(alpha, r_lo);
  int prev_sign = 0;
  std::size_t changes = 0;
  for (std::size_t i = 1; i < points; ++i) {
    const double cur = stable_ratio_pdf(alpha, r_lo * std::exp(step * static_cast<double>(i)));
    const double diff = cur - prev;
    const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
    if (sign != 0) {
      if (prev_sign != 0 && sign != prev_sign) ++changes;
      prev_sign = sign;
    }
    prev = cur;
  }
  return changes;
}

std::vector<RatioDensityRow> ratio_density_table(std::size_t points, double x_max) {
  if (points < 1 || !(x_max > 0.0)) throw std::invalid_argument("ratio_density_table: bad grid");
  std::vector<RatioDensityRow> rows;
  rows.reserve(7 * points);
  for (int k = 1; k <= 7; ++k) {
    const double alpha = k / 8.0;
    for (std::size_t i = 1; i <= points; ++i) {
      const double x = x_max * static_cast<double>(i) / static_cast<double>(points);
      rows.push_back({alpha, x, stable_ratio_power_pdf(alpha, x), stable_ratio_pdf(alpha, x)});
    }
  }
  return rows;
}

std::vector<DiscriminantRow> discriminant_table(std::size_t points) {
  if (points < 2) throw std::invalid_argument("discriminant_table: need at least 2 points");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<DiscriminantRow> rows;
  rows.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    // alpha over (0,1), endpoints excluded
    const double alpha = static_cast<double>(i + 1) / static_cast<double>(points + 1);
    DiscriminantRow row{alpha, half_discriminant(alpha), nan, nan};
    if (const auto e = ratio_density_extrema(alpha)) {
      row.r_minus = e->r_minus;
      row.r_plus = e->r_plus;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pmeans
