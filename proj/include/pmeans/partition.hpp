#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pmeans/discrete.hpp"
#include "pmeans/rng.hpp"

namespace pmeans {

/// Ordered sequence of positive integers (n_1, ..., n_k) summing to n.
class Composition {
 public:
  /// Throws std::invalid_argument if empty or any part is zero.
  explicit Composition(std::vector<std::size_t> parts);

  const std::vector<std::size_t>& parts() const { return parts_; }
  std::size_t n() const { return n_; }
  std::size_t k() const { return parts_.size(); }

  friend bool operator==(const Composition&, const Composition&) = default;

 private:
  std::vector<std::size_t> parts_;
  std::size_t n_ = 0;
};

/// Largest n accepted by the enumeration-based operations.
inline constexpr std::size_t kMaxEnumerationOrder = 25;

/// Visits every composition of n in lexicographic order of the parts,
/// e.g. (1,1,1), (1,2), (2,1), (3).
void for_each_composition(std::size_t n, const std::function<void(const Composition&)>& visit);

/// Compositions of n into exactly k parts, lexicographic.
void for_each_composition(std::size_t n, std::size_t k,
                          const std::function<void(const Composition&)>& visit);

/// multinomial(n; n_1, ..., n_k)
double multinomial(const Composition& c);
double binomial(std::size_t n, std::size_t k);
double factorial(std::size_t n);

/// log of the (alpha, theta) EPPF; -inf where the EPPF vanishes
/// (more than m blocks in the finite regime).
double log_eppf(const AlphaTheta& params, const std::vector<std::size_t>& block_sizes);

/// p(n_1..n_k) = prod_{i<k}(theta + i alpha) prod_i (1-alpha)_{n_i-1} / (theta+1)_{n-1}
double eppf(const AlphaTheta& params, const Composition& c);

/// Exchangeable composition probability: multinomial(n; parts) eppf / k!.
double ecpf(const AlphaTheta& params, const Composition& c);

/// ECPF of sampling from the uniform distribution on m points:
/// m^{-n} binom(m, k) multinomial(n; parts).
double ecpf_uniform(std::size_t m, const Composition& c);

using EcpfProvider = std::function<double(const Composition&)>;

EcpfProvider make_ecpf_provider(const AlphaTheta& params);
EcpfProvider make_uniform_ecpf_provider(std::size_t m);

/// P(K_n = k) for k = 1..n (index k-1), by summing the ECPF over the
/// compositions of n into k parts.
std::vector<double> kn_distribution(const EcpfProvider& ecpf_provider, std::size_t n);

/// Block sizes in order of appearance.
struct BlockState {
  std::vector<std::size_t> block_sizes;

  std::size_t total() const;
};

/// Probabilities of the next index joining block 0..k-1 (entries 0..k-1)
/// or opening a new block (entry k), as ratios of EPPF values. Throws
/// std::invalid_argument for a state of EPPF zero.
std::vector<double> seating_probabilities(const AlphaTheta& params, const BlockState& state);

/// Sequential (Chinese restaurant) sample of the partition of [n].
BlockState crp_sample(const AlphaTheta& params, std::size_t n, RngStream& rng);

/// Ewens(theta) law on permutations of [n] with cycle counts c_i
/// (cycle_counts[i-1] = number of i-cycles).
struct EwensProbability {
  /// Probability of any single permutation with these cycle counts,
  /// theta^K / (theta)_n.
  double per_permutation;
  /// Probability of the whole cycle type, times the number of such
  /// permutations n! / prod(i^{c_i} c_i!).
  double cycle_type;
};
EwensProbability ewens_permutation_prob(double theta, const std::vector<std::size_t>& cycle_counts);

/// Visits each partition of n as a cycle-count vector.
void for_each_cycle_type(std::size_t n,
                         const std::function<void(const std::vector<std::size_t>&)>& visit);

/// p(n) - sum_{i=1}^{k+1} p(n^{(i+)}): zero for a consistent EPPF.
double consistency_residual(const AlphaTheta& params, const Composition& c);

}  // namespace pmeans
