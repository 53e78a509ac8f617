#include "pmeans/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace pmeans {

namespace {

void require_sorted(const std::vector<double>& xs, const char* who) {
  if (xs.empty()) throw std::invalid_argument(std::string(who) + ": no samples");
  if (!std::is_sorted(xs.begin(), xs.end())) {
    throw std::invalid_argument(std::string(who) + ": samples must be sorted");
  }
}

double pairwise_range(const double* xs, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += xs[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_range(xs, half) + pairwise_range(xs + half, n - half);
}

}  // namespace

double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
  require_sorted(sorted, "ks_statistic");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    // ties: the empirical CDF jumps over the whole run at once
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double f = cdf(sorted[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n),
                  std::abs(static_cast<double>(j + 1) / n - f)});
    i = j + 1;
  }
  return d;
}

double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  require_sorted(a, "ks_two_sample");
  require_sorted(b, "ks_two_sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_threshold(std::size_t n) { return 1.95 / std::sqrt(static_cast<double>(n)); }

double ks_two_sample_threshold(std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return 1.95 * std::sqrt((dn + dm) / (dn * dm));
}

double pairwise_sum(const std::vector<double>& xs) { return pairwise_range(xs.data(), xs.size()); }

SampleSummary summarize(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("summarize: no samples");
  SampleSummary s;
  s.n = xs.size();
  const double n = static_cast<double>(s.n);
  s.mean = pairwise_sum(xs) / n;
  if (s.n > 1) {
    std::vector<double> sq(xs.size());
    std::transform(xs.begin(), xs.end(), sq.begin(),
                   [&](double x) { return (x - s.mean) * (x - s.mean); });
    s.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return s;
}

double empirical_quantile(const std::vector<double>& sorted, double q) {
  require_sorted(sorted, "empirical_quantile");
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("empirical_quantile: q must lie in [0,1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ChiSquareResult chi_square_test(const std::vector<std::size_t>& counts,
                                const std::vector<double>& probs, double min_expected) {
  if (counts.size() != probs.size() || counts.empty()) {
    throw std::invalid_argument("chi_square_test: counts and probs must match and be nonempty");
  }
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  std::vector<double> obs;
  std::vector<double> exp;
  double pend_obs = 0.0;
  double pend_exp = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    pend_obs += static_cast<double>(counts[i]);
    pend_exp += total * probs[i];
    if (pend_exp >= min_expected) {
      obs.push_back(pend_obs);
      exp.push_back(pend_exp);
      pend_obs = pend_exp = 0.0;
    }
  }
  if (pend_exp > 0.0 || pend_obs > 0.0) {
    if (exp.empty()) {
      obs.push_back(pend_obs);
      exp.push_back(pend_exp);
    } else {
      obs.back() += pend_obs;
      exp.back() += pend_exp;
    }
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp[i] > 0.0) stat += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  const std::size_t dof = obs.size() > 1 ? obs.size() - 1 : 1;
  const boost::math::chi_squared dist(static_cast<double>(dof));
  return {stat, dof, boost::math::cdf(boost::math::complement(dist, stat))};
}

}  // namespace pmeans
