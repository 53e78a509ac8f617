#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pmeans/rng.hpp"

namespace pmeans {

enum class OrderTag { size_biased, ranked, as_constructed };

std::string to_string(OrderTag tag);
OrderTag order_tag_from_string(const std::string& s);

/// A realized random discrete distribution: atom weights plus the defect
/// mass 1 - sum(weights) that belongs to no atom.
struct RandomDiscreteSample {
  std::vector<double> weights;
  double defect = 0.0;
  OrderTag order = OrderTag::as_constructed;

  std::size_t size() const { return weights.size(); }
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Compensated sum of the weights.
double total_weight(const RandomDiscreteSample& p);

/// Throws InvariantViolation unless weights are nonnegative, the defect is
/// nonnegative, weights + defect = 1 within `tol`, and ranked samples are
/// non-increasing.
void validate(const RandomDiscreteSample& p, double tol = 1e-12);

/// Admissible (alpha, theta) pair for the two-parameter family.
///   finite:   alpha < 0, theta = -m alpha for a positive integer m
///   dirichlet: alpha = 0, theta > 0
///   stable:   0 < alpha < 1, theta > -alpha
class AlphaTheta {
 public:
  enum class Regime { finite, dirichlet, stable };

  /// Throws std::invalid_argument for parameters outside all three regimes.
  AlphaTheta(double alpha, double theta);

  /// The finite regime from its atom count: alpha = -theta / m.
  static AlphaTheta finite(std::size_t m, double theta);

  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  Regime regime() const { return regime_; }
  /// Number of atoms in the finite regime, 0 otherwise.
  std::size_t m() const { return m_; }

 private:
  double alpha_;
  double theta_;
  Regime regime_;
  std::size_t m_ = 0;
};

inline constexpr double kDefaultTruncTol = 1e-8;
inline constexpr std::size_t kMaxStickAtoms = 10'000'000;

/// Stopping rule for infinite stick-breaking. Generation stops once the
/// unbroken stick drops below `tol`. If `max_atoms` is nonzero it also
/// stops after that many atoms, leaving whatever remains as defect;
/// otherwise running past kMaxStickAtoms throws.
struct StickTruncation {
  double tol = kDefaultTruncTol;
  std::size_t max_atoms = 0;
};

/// GEM(alpha, theta) residual allocation: P_j = H_j prod_{i<j} (1 - H_i)
/// with independent H_i ~ beta(1 - alpha, theta + alpha i). The unbroken
/// remainder is stored as defect. The finite regime ignores `trunc` and
/// always yields exactly m atoms.
RandomDiscreteSample gem_stick_break(const AlphaTheta& params, const StickTruncation& trunc,
                                     RngStream& rng);
RandomDiscreteSample gem_stick_break(const AlphaTheta& params, double trunc_tol, RngStream& rng);

/// Normalized independent gamma(theta_i) variables (zero where theta_i = 0).
RandomDiscreteSample dirichlet_finite(const std::vector<double>& theta_list, RngStream& rng);

struct GammaSubordinator {};
struct StableSubordinator {
  double alpha;
};
using SubordinatorKind = std::variant<GammaSubordinator, StableSubordinator>;

/// Normalized increments of a gamma or stable(alpha) subordinator over
/// consecutive intervals of the given lengths.
RandomDiscreteSample subordinator_increments(const SubordinatorKind& kind,
                                             const std::vector<double>& lengths, RngStream& rng);

/// Reorders the atoms by successive weight-proportional draws without
/// replacement. Requires a proper (defect-free) sample.
RandomDiscreteSample size_biased_permutation(const RandomDiscreteSample& p, RngStream& rng);

RandomDiscreteSample rank_decreasing(RandomDiscreteSample p);

struct ThinningResult {
  double kept_mass;
  RandomDiscreteSample thinned;
};

/// Keeps each atom independently with probability p and renormalizes the
/// survivors by their total mass F(p). Returns nullopt when no atom
/// survives. A nonzero defect is thinned deterministically to p * defect.
std::optional<ThinningResult> p_thin(const RandomDiscreteSample& sample, double p,
                                     RngStream& rng);

/// Draws a fragmentation of an atom of the given weight.
using FragmentFactory = std::function<RandomDiscreteSample(RngStream&, double parent_weight)>;

inline constexpr std::size_t kMaxComposedAtoms = 100'000;

/// Fragments every atom of p by an independent draw from the factory and
/// returns the ranked fragments. Fragment defects, the defect of p and
/// any mass trimmed beyond kMaxComposedAtoms accumulate into the defect.
RandomDiscreteSample compose(const RandomDiscreteSample& p, const FragmentFactory& q_factory,
                             RngStream& rng);

/// Factory for GEM(alpha, theta) fragments whose absolute truncation
/// (parent weight times unbroken stick) stays below abs_tol.
FragmentFactory gem_fragment_factory(const AlphaTheta& params, double abs_tol,
                                     std::size_t max_atoms = 0);

}  // namespace pmeans
