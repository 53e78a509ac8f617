#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pmeans/discrete.hpp"
#include "pmeans/partition.hpp"
#include "pmeans/rng.hpp"

namespace pmeans {

/// Finite-support law of X: distinct values with positive probabilities.
class AtomicDistribution {
 public:
  /// Throws std::invalid_argument unless sizes match, probabilities are
  /// positive and sum to 1 within 1e-12, and values are distinct.
  AtomicDistribution(std::vector<double> values, std::vector<double> probs);

  /// X = 1 with probability p, 0 otherwise. p = 0 or 1 gives a point mass.
  static AtomicDistribution bernoulli(double p);
  static AtomicDistribution point_mass(double x);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }

  double mean() const;
  /// E X^j
  double moment(std::size_t j) const;
  /// E g(X)
  double expect(const std::function<double(double)>& g) const;
  bool nonnegative() const;

  double sample(RngStream& rng) const;

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

/// (E X^1, ..., E X^n); moments[j-1] = E X^j.
struct MomentVector {
  std::vector<double> moments;

  std::size_t order() const { return moments.size(); }
  double operator[](std::size_t j) const { return moments.at(j - 1); }

  static MomentVector of(const AtomicDistribution& x, std::size_t n);
  /// Every moment equal to v: the moments of a Bernoulli(v) indicator.
  static MomentVector constant(double v, std::size_t n);
};

/// Moments of the P-mean of i.i.d. copies of X from the ECPF of P:
///   E X~^j = sum over compositions (n_1..n_k) of j of ecpf * prod E X^{n_i}.
MomentVector exact_pmean_moments(const EcpfProvider& ecpf_provider, const MomentVector& mx,
                                 std::size_t n);

using EppfFunction = std::function<double(const std::vector<std::size_t>& block_sizes)>;
/// mu(B) for a block B of indices in {0, ..., n-1}.
using BlockMoment = std::function<double(const std::vector<std::size_t>& block)>;

inline constexpr std::size_t kMaxProductMomentOrder = 12;

/// E prod_i Y~_i = sum over set partitions {B_1..B_k} of [n] of
/// p(#B_1, ..., #B_k) prod_j mu(B_j).
double product_moment(const EppfFunction& eppf_fn, std::size_t n, const BlockMoment& mu);

/// Moments of the arithmetic mean of m i.i.d. copies of X, from the
/// m-th power of the moment generating series.
MomentVector classical_mean_moments(std::size_t m, const MomentVector& mx, std::size_t n);

/// Law of K_n for the (alpha, theta) model from the sequential growth
/// recursion P(K_{t+1} = k+1 | K_t = k) = (theta + k alpha) / (theta + t).
std::vector<double> kn_distribution_recursive(const AlphaTheta& params, std::size_t n);

/// E v^{K_n} = sum_k P(K_n = k) v^k.
double pgf_kn_moment(const AlphaTheta& params, double v, std::size_t n);

using PFactory = std::function<RandomDiscreteSample(RngStream&)>;
using XSampler = std::function<double(RngStream&)>;

/// sum_j X_j P_j + defect * E X for one draw of P and i.i.d. X_j.
double mc_pmean(const PFactory& p_factory, const XSampler& x_sampler, double ex, RngStream& rng);

/// P-mean of a given realization of P.
double pmean_of(const RandomDiscreteSample& p, const XSampler& x_sampler, double ex,
                RngStream& rng);

/// Density of the (alpha, 0) mean of a Bernoulli(p) indicator
/// (generalized arcsine law), u in (0,1).
double darling_lamperti_pdf(double alpha, double p, double u);

/// CDF of the same law by tanh-sinh quadrature after the substitution
/// v = u^alpha, which removes the endpoint singularity.
double darling_lamperti_cdf(double alpha, double p, double u);

/// E (1 + lambda M)^{-1} for the same law:
/// (q + p (1+lambda)^{alpha-1}) / (q + p (1+lambda)^alpha).
double lamperti_stieltjes(double alpha, double p, double lambda);

/// (sum_i p_i (1 + lambda x_i)^alpha)^{-theta/alpha}
///   = E (1 + lambda X~_{alpha,theta})^{-theta},  alpha != 0, theta != 0.
double cs_transform_rhs(const AlphaTheta& params, const AtomicDistribution& x, double lambda);

/// exp(-theta sum_i p_i log(1 + lambda x_i)) = E (1 + lambda X~_{0,theta})^{-theta}.
double dirichlet_log_transform(double theta, const AtomicDistribution& x, double lambda);

struct Alpha0Transform {
  /// E log(1 + lambda X~_{alpha,0})
  double log_form;
  /// E (1 + lambda X~_{alpha,0})^{-1}
  double stieltjes_form;
};
Alpha0Transform alpha0_transform(double alpha, const AtomicDistribution& x, double lambda);

/// Taylor coefficients f^{(k)}(0) / k!, k = 0..order, from central
/// differences with Richardson extrapolation over steps h0, h0/2, ...
std::vector<double> taylor_coefficients(const std::function<double(double)>& f, std::size_t order,
                                        double h0 = 0.2, int halvings = 4);

}  // namespace pmeans
