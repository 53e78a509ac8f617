#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmeans/discrete.hpp"

namespace pmeans {

class UnknownCheck : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using CheckParams = std::map<std::string, double>;

struct CheckConfig {
  std::uint64_t seed = 42;
  /// 0 selects the check's own default sample size.
  std::size_t n_samples = 0;
  /// Overrides of the check's default parameters (alpha, theta, p, ...).
  CheckParams params;
};

struct CheckReport {
  std::string check_name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  bool passed = false;
  /// true for the run against a deliberately shifted target
  bool sentinel = false;
  /// the analytic target, in words
  std::string target;
  /// parameters actually used (defaults merged with overrides)
  CheckParams params;
  /// further diagnostics, e.g. the largest absolute deviation
  std::map<std::string, double> extras;
};

/// A check run against its true target and against the target with one
/// parameter moved by 0.2. The sentinel must fail.
struct CheckOutcome {
  CheckReport nominal;
  CheckReport sentinel;
};

/// Registered checks in a fixed order.
const std::vector<std::string>& check_names();
bool is_registered_check(const std::string& name);

/// Throws UnknownCheck for names outside the registry.
CheckOutcome run_check_with_sentinel(const std::string& name, const CheckConfig& config);
CheckReport run_check(const std::string& name, const CheckConfig& config);

/// Parameter cells of the default grid (theta in {0.5, 1, 2}, alpha in
/// {0.25, 0.5, 0.75}, p in {0.2, 0.5, 0.8}) that apply to a check.
std::vector<CheckParams> default_grid(const std::string& name);

std::size_t default_samples(const std::string& name);

/// Convex-order properties of P-means: mean preservation, convex
/// contraction, the second-moment identity and refinement ordering.
std::vector<CheckReport> convex_order_checks(std::uint64_t seed, std::size_t n_samples);

/// Truncation used for Monte Carlo GEM draws: the default tolerance when
/// alpha <= 0, otherwise a capped stick whose tolerance also shrinks like
/// 1e-4^{1/alpha}, since edge mass is of order x^alpha.
StickTruncation mc_truncation(const AlphaTheta& params);
/// As above, for P-means of Bernoulli(p) indicators. Under (0, theta) their
/// law has CDF of order x^{theta min(p, q)} near 0 and 1, so the tolerance
/// shrinks until that edge mass below it is negligible.
StickTruncation mc_truncation(const AlphaTheta& params, double p);
inline constexpr double kMcStableTruncTol = 1e-6;
inline constexpr std::size_t kMcMaxAtoms = 256;

nlohmann::json to_json(const CheckReport& report);

}  // namespace pmeans
