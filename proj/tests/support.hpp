#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "pmeans/rng.hpp"
#include "pmeans/stats.hpp"

namespace testing {

/// Collects n draws of f.
inline std::vector<double> draw(std::size_t n, const std::function<double()>& f) {
  std::vector<double> v(n);
  for (auto& x : v) x = f();
  return v;
}

/// |mean - target| <= 3 standard errors.
inline void check_mean(const std::vector<double>& xs, double target) {
  const pmeans::SampleSummary s = pmeans::summarize(xs);
  INFO("mean " << s.mean << " target " << target << " se " << s.std_error);
  CHECK(std::abs(s.mean - target) <= 3.0 * s.std_error);
}

inline double ks(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  return pmeans::ks_statistic(xs, cdf);
}

inline void check_ks(const std::vector<double>& xs, const std::function<double(double)>& cdf) {
  const double d = ks(xs, cdf);
  INFO("KS " << d << " threshold " << pmeans::ks_threshold(xs.size()));
  CHECK(d <= pmeans::ks_threshold(xs.size()));
}

inline double ks2(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return pmeans::ks_two_sample(a, b);
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace testing
