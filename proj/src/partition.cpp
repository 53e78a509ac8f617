#include "pmeans/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pmeans/detail/compensated_sum.hpp"

namespace pmeans {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void compositions_rec(std::size_t remaining, std::size_t parts_left,
                      std::vector<std::size_t>& prefix,
                      const std::function<void(const Composition&)>& visit) {
  // parts_left == 0 means "any number of parts"
  if (remaining == 0) {
    if (parts_left == 0 || prefix.size() == parts_left) visit(Composition(prefix));
    return;
  }
  if (parts_left != 0 && prefix.size() >= parts_left) return;
  std::size_t max_first = remaining;
  if (parts_left != 0) max_first = remaining - (parts_left - prefix.size() - 1);
  for (std::size_t first = 1; first <= max_first; ++first) {
    prefix.push_back(first);
    compositions_rec(remaining - first, parts_left, prefix, visit);
    prefix.pop_back();
  }
}

void require_enumerable(std::size_t n, const char* who) {
  if (n < 1 || n > kMaxEnumerationOrder) {
    throw std::invalid_argument(std::string(who) + ": n must lie in [1, " +
                                std::to_string(kMaxEnumerationOrder) + "]");
  }
}

void partitions_rec(std::size_t remaining, std::size_t max_part,
                    std::vector<std::size_t>& counts,
                    const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (remaining == 0) {
    visit(counts);
    return;
  }
  for (std::size_t part = std::min(remaining, max_part); part >= 1; --part) {
    ++counts[part - 1];
    partitions_rec(remaining - part, part, counts, visit);
    --counts[part - 1];
  }
}

}  // namespace

Composition::Composition(std::vector<std::size_t> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("Composition: no parts");
  for (std::size_t p : parts_) {
    if (p == 0) throw std::invalid_argument("Composition: parts must be >= 1");
    n_ += p;
  }
}

void for_each_composition(std::size_t n, const std::function<void(const Composition&)>& visit) {
  if (n == 0) return;
  std::vector<std::size_t> prefix;
  compositions_rec(n, 0, prefix, visit);
}

void for_each_composition(std::size_t n, std::size_t k,
                          const std::function<void(const Composition&)>& visit) {
  if (n == 0 || k == 0 || k > n) return;
  std::vector<std::size_t> prefix;
  compositions_rec(n, k, prefix, visit);
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double b = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(b);
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

double multinomial(const Composition& c) {
  double m = 1.0;
  std::size_t used = 0;
  for (std::size_t part : c.parts()) {
    used += part;
    m *= binomial(used, part);
  }
  return m;
}

double log_eppf(const AlphaTheta& params, const std::vector<std::size_t>& block_sizes) {
  if (block_sizes.empty()) throw std::invalid_argument("log_eppf: no blocks");
  // The EPPF is symmetric; a canonical order makes that hold bit for bit.
  std::vector<std::size_t> sizes = block_sizes;
  std::sort(sizes.begin(), sizes.end());

  const double alpha = params.alpha();
  const double theta = params.theta();
  const std::size_t k = sizes.size();
  const bool finite = params.regime() == AlphaTheta::Regime::finite;
  if (finite && k > params.m()) return kNegInf;  // factor theta + m alpha = 0

  detail::CompensatedSum acc;
  for (std::size_t i = 1; i < k; ++i) {
    const double factor = finite ? theta * static_cast<double>(params.m() - i) /
                                       static_cast<double>(params.m())
                                 : theta + static_cast<double>(i) * alpha;
    acc += std::log(factor);
  }
  std::size_t n = 0;
  for (std::size_t size : sizes) {
    if (size == 0) throw std::invalid_argument("log_eppf: empty block");
    n += size;
    for (std::size_t j = 1; j < size; ++j) acc += std::log(static_cast<double>(j) - alpha);
  }
  for (std::size_t j = 1; j < n; ++j) acc += -std::log(theta + static_cast<double>(j));
  return acc.value();
}

double eppf(const AlphaTheta& params, const Composition& c) {
  const double l = log_eppf(params, c.parts());
  return std::isinf(l) ? 0.0 : std::exp(l);
}

double ecpf(const AlphaTheta& params, const Composition& c) {
  const double l = log_eppf(params, c.parts());
  if (std::isinf(l)) return 0.0;
  return std::exp(l + std::log(multinomial(c)) - std::log(factorial(c.k())));
}

double ecpf_uniform(std::size_t m, const Composition& c) {
  if (m == 0) throw std::invalid_argument("ecpf_uniform: m must be >= 1");
  if (c.k() > m) return 0.0;
  return std::pow(1.0 / static_cast<double>(m), static_cast<double>(c.n())) *
         binomial(m, c.k()) * multinomial(c);
}

EcpfProvider make_ecpf_provider(const AlphaTheta& params) {
  return [params](const Composition& c) { return ecpf(params, c); };
}

EcpfProvider make_uniform_ecpf_provider(std::size_t m) {
  if (m == 0) throw std::invalid_argument("make_uniform_ecpf_provider: m must be >= 1");
  return [m](const Composition& c) { return ecpf_uniform(m, c); };
}

std::vector<double> kn_distribution(const EcpfProvider& ecpf_provider, std::size_t n) {
  require_enumerable(n, "kn_distribution");
  std::vector<detail::CompensatedSum> acc(n);
  for_each_composition(n, [&](const Composition& c) { acc[c.k() - 1] += ecpf_provider(c); });
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = acc[k].value();
  return out;
}

std::size_t BlockState::total() const {
  return std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
}

std::vector<double> seating_probabilities(const AlphaTheta& params, const BlockState& state) {
  const std::size_t k = state.block_sizes.size();
  std::vector<double> probs(k + 1, 0.0);
  if (k == 0) {
    probs[0] = 1.0;
    return probs;
  }
  const double base = log_eppf(params, state.block_sizes);
  if (std::isinf(base)) {
    throw std::invalid_argument("seating_probabilities: state has probability zero");
  }
  std::vector<std::size_t> grown = state.block_sizes;
  for (std::size_t i = 0; i < k; ++i) {
    ++grown[i];
    probs[i] = std::exp(log_eppf(params, grown) - base);
    --grown[i];
  }
  grown.push_back(1);
  const double l_new = log_eppf(params, grown);
  probs[k] = std::isinf(l_new) ? 0.0 : std::exp(l_new - base);
  return probs;
}

BlockState crp_sample(const AlphaTheta& params, std::size_t n, RngStream& rng) {
  if (n == 0) throw std::invalid_argument("crp_sample: n must be >= 1");
  BlockState state;
  state.block_sizes.reserve(16);
  for (std::size_t t = 0; t < n; ++t) {
    const std::vector<double> probs = seating_probabilities(params, state);
    double u = rng.uniform() * std::accumulate(probs.begin(), probs.end(), 0.0);
    std::size_t choice = probs.size() - 1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (u < probs[i]) {
        choice = i;
        break;
      }
      u -= probs[i];
    }
    while (probs[choice] == 0.0 && choice > 0) --choice;
    if (choice == state.block_sizes.size()) {
      state.block_sizes.push_back(1);
    } else {
      ++state.block_sizes[choice];
    }
  }
  return state;
}

EwensProbability ewens_permutation_prob(double theta,
                                        const std::vector<std::size_t>& cycle_counts) {
  if (!(theta > 0.0)) throw std::domain_error("ewens_permutation_prob: theta must be > 0");
  std::size_t n = 0;
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < cycle_counts.size(); ++i) {
    n += (i + 1) * cycle_counts[i];
    cycles += cycle_counts[i];
  }
  if (n == 0) throw std::invalid_argument("ewens_permutation_prob: cycle counts sum to n = 0");

  double log_per = static_cast<double>(cycles) * std::log(theta);
  for (std::size_t j = 0; j < n; ++j) log_per -= std::log(theta + static_cast<double>(j));

  // number of permutations with these cycle counts: n! / prod(i^{c_i} c_i!)
  double log_count = std::log(factorial(n));
  for (std::size_t i = 0; i < cycle_counts.size(); ++i) {
    const double c = static_cast<double>(cycle_counts[i]);
    log_count -= c * std::log(static_cast<double>(i + 1)) + std::log(factorial(cycle_counts[i]));
  }
  return {std::exp(log_per), std::exp(log_per + log_count)};
}

void for_each_cycle_type(std::size_t n,
                         const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (n == 0) return;
  std::vector<std::size_t> counts(n, 0);
  partitions_rec(n, n, counts, visit);
}

double consistency_residual(const AlphaTheta& params, const Composition& c) {
  detail::CompensatedSum acc;
  acc += eppf(params, c);
  std::vector<std::size_t> grown = c.parts();
  for (std::size_t i = 0; i < grown.size(); ++i) {
    ++grown[i];
    acc += -eppf(params, Composition(grown));
    --grown[i];
  }
  grown.push_back(1);
  acc += -eppf(params, Composition(grown));
  return acc.value();
}

}  // namespace pmeans
