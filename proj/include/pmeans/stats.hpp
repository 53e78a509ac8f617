#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pmeans {

/// sup_x |F_n(x) - F(x)| for sorted samples. Throws on empty or unsorted input.
double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf);

/// Two-sample sup distance between empirical CDFs; both inputs sorted.
double ks_two_sample(const std::vector<double>& a_sorted, const std::vector<double>& b_sorted);

/// 1.95 / sqrt(n), roughly the 0.999 quantile of sqrt(n) D_n.
double ks_threshold(std::size_t n);
/// 1.95 sqrt((n + m) / (n m)).
double ks_two_sample_threshold(std::size_t n, std::size_t m);

/// Sum in a fixed pairwise order, independent of thread scheduling.
double pairwise_sum(const std::vector<double>& xs);

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  /// Standard error of the mean, sqrt(s^2 / n).
  double std_error = 0.0;
};
SampleSummary summarize(const std::vector<double>& xs);

/// Linear-interpolated empirical quantile of sorted data, q in [0,1].
double empirical_quantile(const std::vector<double>& sorted, double q);

struct ChiSquareResult {
  double statistic;
  std::size_t dof;
  double p_value;
};
/// Pearson test of counts against cell probabilities. Cells with expected
/// count below min_expected are pooled into their neighbour.
ChiSquareResult chi_square_test(const std::vector<std::size_t>& counts,
                                const std::vector<double>& probs, double min_expected = 5.0);

}  // namespace pmeans
