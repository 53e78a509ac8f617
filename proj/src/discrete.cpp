#include "pmeans/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pmeans/detail/compensated_sum.hpp"
#include "pmeans/sampling.hpp"

namespace pmeans {

namespace {

// Normalizes log-scale masses into weights summing to one.
std::vector<double> normalize_logs(const std::vector<double>& logs) {
  double top = -std::numeric_limits<double>::infinity();
  for (double l : logs) top = std::max(top, l);
  std::vector<double> w(logs.size());
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    w[i] = std::isinf(logs[i]) ? 0.0 : std::exp(logs[i] - top);
    total += w[i];
  }
  const double t = total.value();
  for (double& x : w) x /= t;
  return w;
}

}  // namespace

std::string to_string(OrderTag tag) {
  switch (tag) {
    case OrderTag::size_biased:
      return "size_biased";
    case OrderTag::ranked:
      return "ranked";
    case OrderTag::as_constructed:
      return "as_constructed";
  }
  return "as_constructed";
}

OrderTag order_tag_from_string(const std::string& s) {
  if (s == "size_biased") return OrderTag::size_biased;
  if (s == "ranked") return OrderTag::ranked;
  if (s == "as_constructed") return OrderTag::as_constructed;
  throw std::invalid_argument("unknown order tag: " + s);
}

double total_weight(const RandomDiscreteSample& p) {
  detail::CompensatedSum s;
  for (double w : p.weights) s += w;
  return s.value();
}

void validate(const RandomDiscreteSample& p, double tol) {
  for (double w : p.weights) {
    if (!(w >= 0.0) || std::isinf(w)) throw InvariantViolation("negative or non-finite weight");
  }
  if (!(p.defect >= 0.0) || std::isinf(p.defect)) {
    throw InvariantViolation("negative or non-finite defect");
  }
  const double mass = total_weight(p) + p.defect;
  if (std::abs(mass - 1.0) > tol) {
    throw InvariantViolation("weights + defect = " + std::to_string(mass) + ", expected 1");
  }
  if (p.order == OrderTag::ranked &&
      !std::is_sorted(p.weights.begin(), p.weights.end(), std::greater<>())) {
    throw InvariantViolation("ranked sample is not non-increasing");
  }
}

AlphaTheta::AlphaTheta(double alpha, double theta) : alpha_(alpha), theta_(theta) {
  if (!std::isfinite(alpha) || !std::isfinite(theta)) {
    throw std::invalid_argument("AlphaTheta: parameters must be finite");
  }
  if (alpha < 0.0) {
    const double m = theta / -alpha;
    const double mi = std::round(m);
    if (!(theta > 0.0) || mi < 1.0 || std::abs(m - mi) > 1e-9 * mi) {
      throw std::invalid_argument("AlphaTheta: alpha < 0 requires theta = -m alpha, m = 1, 2, ...");
    }
    regime_ = Regime::finite;
    m_ = static_cast<std::size_t>(mi);
  } else if (alpha == 0.0) {
    if (!(theta > 0.0)) throw std::invalid_argument("AlphaTheta: alpha = 0 requires theta > 0");
    regime_ = Regime::dirichlet;
  } else if (alpha < 1.0) {
    if (!(theta > -alpha)) {
      throw std::invalid_argument("AlphaTheta: 0 < alpha < 1 requires theta > -alpha");
    }
    regime_ = Regime::stable;
  } else {
    throw std::invalid_argument("AlphaTheta: alpha must be < 1");
  }
}

AlphaTheta AlphaTheta::finite(std::size_t m, double theta) {
  if (m == 0) throw std::invalid_argument("AlphaTheta::finite: m must be >= 1");
  return AlphaTheta(-theta / static_cast<double>(m), theta);
}

RandomDiscreteSample gem_stick_break(const AlphaTheta& params, const StickTruncation& trunc,
                                     RngStream& rng) {
  if (!(trunc.tol > 0.0 && trunc.tol < 1.0)) {
    throw std::invalid_argument("gem_stick_break: trunc_tol must lie in (0,1)");
  }
  const double alpha = params.alpha();
  const double theta = params.theta();
  const bool finite = params.regime() == AlphaTheta::Regime::finite;
  const std::size_t m = params.m();

  RandomDiscreteSample out;
  out.order = OrderTag::size_biased;
  double remaining = 1.0;
  for (std::size_t i = 1;; ++i) {
    if (finite && i == m) {
      // beta(1 - alpha, 0) is degenerate at 1: the last atom takes the rest.
      out.weights.push_back(remaining);
      remaining = 0.0;
      break;
    }
    const double second = finite ? theta * static_cast<double>(m - i) / static_cast<double>(m)
                                 : theta + alpha * static_cast<double>(i);
    const BetaPair h = sample_beta_pair(1.0 - alpha, second, rng);
    const double next = remaining * h.complement;
    out.weights.push_back(remaining - next);
    remaining = next;
    if (finite) continue;
    if (remaining < trunc.tol) break;
    if (trunc.max_atoms != 0) {
      if (out.weights.size() >= trunc.max_atoms) break;
    } else if (out.weights.size() >= kMaxStickAtoms) {
      throw std::runtime_error("gem_stick_break: atom guard reached; trunc_tol too small");
    }
  }
  out.defect = remaining;
  return out;
}

RandomDiscreteSample gem_stick_break(const AlphaTheta& params, double trunc_tol, RngStream& rng) {
  return gem_stick_break(params, StickTruncation{trunc_tol, 0}, rng);
}

RandomDiscreteSample dirichlet_finite(const std::vector<double>& theta_list, RngStream& rng) {
  if (theta_list.empty()) throw std::domain_error("dirichlet_finite: empty parameter list");
  bool any_positive = false;
  for (double t : theta_list) {
    if (!(t >= 0.0) || std::isinf(t)) {
      throw std::domain_error("dirichlet_finite: parameters must be finite and >= 0");
    }
    any_positive = any_positive || t > 0.0;
  }
  if (!any_positive) throw std::domain_error("dirichlet_finite: all parameters are zero");

  std::vector<double> logs(theta_list.size());
  for (std::size_t i = 0; i < theta_list.size(); ++i) {
    logs[i] = theta_list[i] > 0.0 ? sample_log_gamma(theta_list[i], rng)
                                  : -std::numeric_limits<double>::infinity();
  }
  return {normalize_logs(logs), 0.0, OrderTag::as_constructed};
}

RandomDiscreteSample subordinator_increments(const SubordinatorKind& kind,
                                             const std::vector<double>& lengths, RngStream& rng) {
  if (lengths.empty()) throw std::domain_error("subordinator_increments: no intervals");
  for (double l : lengths) {
    if (!(l > 0.0) || std::isinf(l)) {
      throw std::domain_error("subordinator_increments: lengths must be finite and > 0");
    }
  }
  std::vector<double> logs(lengths.size());
  if (const auto* stable = std::get_if<StableSubordinator>(&kind)) {
    const double a = stable->alpha;
    if (!(a > 0.0 && a < 1.0)) {
      throw std::domain_error("subordinator_increments: stable index must lie in (0,1)");
    }
    // T(s) has the law of s^{1/alpha} T(1)
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      logs[i] = std::log(lengths[i]) / a + sample_log_stable(a, rng);
    }
  } else {
    for (std::size_t i = 0; i < lengths.size(); ++i) logs[i] = sample_log_gamma(lengths[i], rng);
  }
  return {normalize_logs(logs), 0.0, OrderTag::as_constructed};
}

RandomDiscreteSample size_biased_permutation(const RandomDiscreteSample& p, RngStream& rng) {
  if (p.defect > 0.0) {
    throw std::invalid_argument("size_biased_permutation: sample must be proper (defect 0)");
  }
  // Independent exponential clocks with rates w_i ring in size-biased order.
  std::vector<double> keys(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double e = rng.exponential();
    keys[i] = p.weights[i] > 0.0 ? e / p.weights[i] : std::numeric_limits<double>::infinity();
  }
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  RandomDiscreteSample out;
  out.order = OrderTag::size_biased;
  out.weights.reserve(p.size());
  for (std::size_t i : idx) out.weights.push_back(p.weights[i]);
  return out;
}

RandomDiscreteSample rank_decreasing(RandomDiscreteSample p) {
  std::stable_sort(p.weights.begin(), p.weights.end(), std::greater<>());
  p.order = OrderTag::ranked;
  return p;
}

std::optional<ThinningResult> p_thin(const RandomDiscreteSample& sample, double p,
                                     RngStream& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("p_thin: p must lie in (0,1]");
  for (double w : sample.weights) {
    if (!(w > 0.0)) throw std::invalid_argument("p_thin: all weights must be > 0");
  }
  std::vector<double> kept;
  detail::CompensatedSum mass;
  for (double w : sample.weights) {
    if (rng.uniform() < p) {
      kept.push_back(w);
      mass += w;
    }
  }
  if (kept.empty()) return std::nullopt;
  const double thinned_defect = p * sample.defect;
  mass += thinned_defect;
  const double f = mass.value();
  for (double& w : kept) w /= f;
  return ThinningResult{f, RandomDiscreteSample{std::move(kept), thinned_defect / f, sample.order}};
}

RandomDiscreteSample compose(const RandomDiscreteSample& p, const FragmentFactory& q_factory,
                             RngStream& rng) {
  RandomDiscreteSample out;
  detail::CompensatedSum defect;
  defect += p.defect;
  for (double w : p.weights) {
    const RandomDiscreteSample q = q_factory(rng, w);
    for (double f : q.weights) out.weights.push_back(w * f);
    defect += w * q.defect;
  }
  out = rank_decreasing(std::move(out));
  if (out.weights.size() > kMaxComposedAtoms) {
    for (std::size_t i = kMaxComposedAtoms; i < out.weights.size(); ++i) defect += out.weights[i];
    out.weights.resize(kMaxComposedAtoms);
  }
  out.defect = defect.value();
  return out;
}

FragmentFactory gem_fragment_factory(const AlphaTheta& params, double abs_tol,
                                     std::size_t max_atoms) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("gem_fragment_factory: abs_tol must be > 0");
  return [params, abs_tol, max_atoms](RngStream& rng, double parent_weight) {
    const double tol = parent_weight > 0.0 ? std::min(0.5, abs_tol / parent_weight) : 0.5;
    return gem_stick_break(params, StickTruncation{tol, max_atoms}, rng);
  };
}

}  // namespace pmeans
