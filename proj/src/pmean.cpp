#include "pmeans/pmean.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pmeans/detail/compensated_sum.hpp"
#include "pmeans/specialfn.hpp"

namespace pmeans {

namespace {

void require_open_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw std::domain_error(std::string(what) + " must lie in (0,1)");
}

// 1 + lambda x_i must stay positive for every support point.
void require_transform_domain(const AtomicDistribution& x, double lambda, const char* who) {
  for (double v : x.values()) {
    if (!(1.0 + lambda * v > 0.0)) {
      throw std::domain_error(std::string(who) + ": 1 + lambda x must be > 0 on the support");
    }
  }
}

}  // namespace

AtomicDistribution::AtomicDistribution(std::vector<double> values, std::vector<double> probs)
    : values_(std::move(values)), probs_(std::move(probs)) {
  if (values_.empty() || values_.size() != probs_.size()) {
    throw std::invalid_argument("AtomicDistribution: values and probs must be nonempty and match");
  }
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] > 0.0)) throw std::invalid_argument("AtomicDistribution: probs must be > 0");
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("AtomicDistribution: values must be finite");
    }
    total += probs_[i];
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw std::invalid_argument("AtomicDistribution: probs must sum to 1");
  }
  std::vector<double> sorted = values_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("AtomicDistribution: values must be distinct");
  }
  cumulative_.resize(probs_.size());
  double c = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    c += probs_[i];
    cumulative_[i] = c;
  }
}

AtomicDistribution AtomicDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("bernoulli: p must lie in [0,1]");
  if (p == 0.0) return point_mass(0.0);
  if (p == 1.0) return point_mass(1.0);
  return AtomicDistribution({0.0, 1.0}, {1.0 - p, p});
}

AtomicDistribution AtomicDistribution::point_mass(double x) { return AtomicDistribution({x}, {1.0}); }

double AtomicDistribution::mean() const { return moment(1); }

double AtomicDistribution::moment(std::size_t j) const {
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    s += probs_[i] * std::pow(values_[i], static_cast<double>(j));
  }
  return s.value();
}

double AtomicDistribution::expect(const std::function<double(double)>& g) const {
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < values_.size(); ++i) s += probs_[i] * g(values_[i]);
  return s.value();
}

bool AtomicDistribution::nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

double AtomicDistribution::sample(RngStream& rng) const {
  if (values_.size() == 1) return values_[0];
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto i = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
      it - cumulative_.begin(), static_cast<std::ptrdiff_t>(values_.size() - 1)));
  return values_[i];
}

MomentVector MomentVector::of(const AtomicDistribution& x, std::size_t n) {
  MomentVector mv;
  mv.moments.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) mv.moments.push_back(x.moment(j));
  return mv;
}

MomentVector MomentVector::constant(double v, std::size_t n) {
  return MomentVector{std::vector<double>(n, v)};
}

MomentVector exact_pmean_moments(const EcpfProvider& ecpf_provider, const MomentVector& mx,
                                 std::size_t n) {
  if (n > kMaxEnumerationOrder) {
    throw std::invalid_argument("exact_pmean_moments: order exceeds the enumeration guard");
  }
  if (mx.order() < n) throw std::invalid_argument("exact_pmean_moments: too few input moments");
  MomentVector out;
  out.moments.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    detail::CompensatedSum acc;
    for_each_composition(j, [&](const Composition& c) {
      double prod = ecpf_provider(c);
      for (std::size_t part : c.parts()) prod *= mx[part];
      acc += prod;
    });
    out.moments.push_back(acc.value());
  }
  return out;
}

double product_moment(const EppfFunction& eppf_fn, std::size_t n, const BlockMoment& mu) {
  if (n < 1 || n > kMaxProductMomentOrder) {
    throw std::invalid_argument("product_moment: n outside the enumeration guard");
  }
  // Set partitions of {0..n-1} as restricted growth strings.
  std::vector<std::size_t> label(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);
  detail::CompensatedSum acc;
  for (;;) {
    const std::size_t k = prefix_max[n - 1] + 1;
    std::vector<std::vector<std::size_t>> blocks(k);
    for (std::size_t i = 0; i < n; ++i) blocks[label[i]].push_back(i);
    std::vector<std::size_t> sizes(k);
    double prod = 1.0;
    for (std::size_t b = 0; b < k; ++b) {
      sizes[b] = blocks[b].size();
      prod *= mu(blocks[b]);
    }
    acc += eppf_fn(sizes) * prod;

    // next restricted growth string
    std::size_t i = n - 1;
    while (i > 0 && label[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) break;
    ++label[i];
    prefix_max[i] = std::max(prefix_max[i - 1], label[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      label[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return acc.value();
}

MomentVector classical_mean_moments(std::size_t m, const MomentVector& mx, std::size_t n) {
  if (m == 0) throw std::invalid_argument("classical_mean_moments: m must be >= 1");
  if (n > kMaxEnumerationOrder) {
    throw std::invalid_argument("classical_mean_moments: order exceeds the enumeration guard");
  }
  if (mx.order() < n) throw std::invalid_argument("classical_mean_moments: too few input moments");
  // f(t) = sum_j E X^j t^j / j!, g = f^m via g_k = (1/k) sum_{i=1}^k ((m+1) i - k) f_i g_{k-i}.
  std::vector<double> f(n + 1), g(n + 1, 0.0);
  f[0] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) f[j] = mx[j] / factorial(j);
  g[0] = 1.0;
  const double md = static_cast<double>(m);
  for (std::size_t k = 1; k <= n; ++k) {
    detail::CompensatedSum acc;
    for (std::size_t i = 1; i <= k; ++i) {
      acc += ((md + 1.0) * static_cast<double>(i) - static_cast<double>(k)) * f[i] * g[k - i];
    }
    g[k] = acc.value() / static_cast<double>(k);
  }
  MomentVector out;
  for (std::size_t k = 1; k <= n; ++k) {
    out.moments.push_back(factorial(k) * g[k] / std::pow(md, static_cast<double>(k)));
  }
  return out;
}

std::vector<double> kn_distribution_recursive(const AlphaTheta& params, std::size_t n) {
  if (n < 1) throw std::invalid_argument("kn_distribution_recursive: n must be >= 1");
  const double alpha = params.alpha();
  const double theta = params.theta();
  const bool finite = params.regime() == AlphaTheta::Regime::finite;
  auto new_block_weight = [&](std::size_t k) {
    if (finite) {
      if (k >= params.m()) return 0.0;
      return theta * static_cast<double>(params.m() - k) / static_cast<double>(params.m());
    }
    return theta + static_cast<double>(k) * alpha;
  };
  std::vector<double> dist(n + 1, 0.0);  // dist[k] = P(K_t = k)
  dist[1] = 1.0;
  for (std::size_t t = 1; t < n; ++t) {
    const double denom = theta + static_cast<double>(t);
    for (std::size_t k = t + 1; k >= 1; --k) {
      const double stay = dist[k] * (static_cast<double>(t) - static_cast<double>(k) * alpha);
      const double grow = dist[k - 1] * (k >= 2 ? new_block_weight(k - 1) : 0.0);
      dist[k] = (stay + grow) / denom;
    }
  }
  return std::vector<double>(dist.begin() + 1, dist.end());
}

double pgf_kn_moment(const AlphaTheta& params, double v, std::size_t n) {
  if (n < 1 || n > kMaxEnumerationOrder) {
    throw std::invalid_argument("pgf_kn_moment: n outside the enumeration guard");
  }
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("pgf_kn_moment: v must lie in [0,1]");
  const std::vector<double> dist = kn_distribution_recursive(params, n);
  // Horner in v
  double acc = 0.0;
  for (std::size_t k = n; k >= 1; --k) acc = (acc + dist[k - 1]) * v;
  return acc;
}

double pmean_of(const RandomDiscreteSample& p, const XSampler& x_sampler, double ex,
                RngStream& rng) {
  detail::CompensatedSum acc;
  for (double w : p.weights) {
    if (w > 0.0) acc += w * x_sampler(rng);
  }
  if (p.defect > 0.0) acc += p.defect * ex;
  return acc.value();
}

double mc_pmean(const PFactory& p_factory, const XSampler& x_sampler, double ex, RngStream& rng) {
  if (!std::isfinite(ex)) throw std::domain_error("mc_pmean: E X must be finite");
  const RandomDiscreteSample p = p_factory(rng);
  return pmean_of(p, x_sampler, ex, rng);
}

double darling_lamperti_pdf(double alpha, double p, double u) {
  require_open_unit(alpha, "darling_lamperti_pdf: alpha");
  require_open_unit(p, "darling_lamperti_pdf: p");
  require_open_unit(u, "darling_lamperti_pdf: u");
  const double q = 1.0 - p;
  const double ubar = 1.0 - u;
  const double ua = std::pow(u, alpha);
  const double va = std::pow(ubar, alpha);
  const double num = p * q * sin_pi(alpha) * std::pow(u, alpha - 1.0) * std::pow(ubar, alpha - 1.0);
  const double den = std::numbers::pi *
                     (q * q * ua * ua + 2.0 * p * q * ua * va * cos_pi(alpha) + p * p * va * va);
  return num / den;
}

namespace {

// int_0^u of the density, with v = x^alpha so the integrand stays bounded:
//   p q sin(alpha pi) (1 - x)^{alpha-1} / (alpha pi (q^2 v^2 + 2 p q v w cos(alpha pi) + p^2 w^2))
// where x = v^{1/alpha}, w = (1 - x)^alpha. The upper tail is the same
// expression with (p, x) replaced by (q, 1 - x).
double darling_lamperti_head(double alpha, double p, double u) {
  const double q = 1.0 - p;
  const double s = sin_pi(alpha);
  const double c = cos_pi(alpha);
  auto g = [&](double v) {
    const double x = std::pow(v, 1.0 / alpha);
    const double xbar = 1.0 - x;
    if (!(xbar > 0.0)) return 0.0;
    const double w = std::pow(xbar, alpha);
    return p * q * s * std::pow(xbar, alpha - 1.0) /
           (alpha * std::numbers::pi * (q * q * v * v + 2.0 * p * q * v * w * c + p * p * w * w));
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(g, 0.0, std::pow(u, alpha));
}

}  // namespace

double darling_lamperti_cdf(double alpha, double p, double u) {
  require_open_unit(alpha, "darling_lamperti_cdf: alpha");
  require_open_unit(p, "darling_lamperti_cdf: p");
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  if (u <= 0.5) return std::clamp(darling_lamperti_head(alpha, p, u), 0.0, 1.0);
  return std::clamp(1.0 - darling_lamperti_head(alpha, 1.0 - p, 1.0 - u), 0.0, 1.0);
}

double lamperti_stieltjes(double alpha, double p, double lambda) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("lamperti_stieltjes: alpha in (0,1)");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("lamperti_stieltjes: p in [0,1]");
  if (!(lambda > -1.0)) throw std::domain_error("lamperti_stieltjes: lambda must be > -1");
  const double q = 1.0 - p;
  return (q + p * std::pow(1.0 + lambda, alpha - 1.0)) / (q + p * std::pow(1.0 + lambda, alpha));
}

double cs_transform_rhs(const AlphaTheta& params, const AtomicDistribution& x, double lambda) {
  if (params.regime() == AlphaTheta::Regime::dirichlet || params.theta() == 0.0) {
    throw std::domain_error("cs_transform_rhs: requires alpha != 0 and theta != 0");
  }
  if (!x.nonnegative()) throw std::domain_error("cs_transform_rhs: X must be nonnegative");
  require_transform_domain(x, lambda, "cs_transform_rhs");
  const double alpha = params.alpha();
  const double inner = x.expect([&](double v) { return std::pow(1.0 + lambda * v, alpha); });
  return std::pow(inner, -params.theta() / alpha);
}

double dirichlet_log_transform(double theta, const AtomicDistribution& x, double lambda) {
  if (!(theta > 0.0)) throw std::domain_error("dirichlet_log_transform: theta must be > 0");
  if (!x.nonnegative()) throw std::domain_error("dirichlet_log_transform: X must be nonnegative");
  require_transform_domain(x, lambda, "dirichlet_log_transform");
  const double e_log = x.expect([&](double v) { return std::log1p(lambda * v); });
  return std::exp(-theta * e_log);
}

Alpha0Transform alpha0_transform(double alpha, const AtomicDistribution& x, double lambda) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha0_transform: alpha in (0,1)");
  if (!x.nonnegative()) throw std::domain_error("alpha0_transform: X must be nonnegative");
  require_transform_domain(x, lambda, "alpha0_transform");
  const double pow_a = x.expect([&](double v) { return std::pow(1.0 + lambda * v, alpha); });
  const double pow_am1 =
      x.expect([&](double v) { return std::pow(1.0 + lambda * v, alpha - 1.0); });
  return {std::log(pow_a) / alpha, pow_am1 / pow_a};
}

std::vector<double> taylor_coefficients(const std::function<double(double)>& f, std::size_t order,
                                        double h0, int halvings) {
  if (!(h0 > 0.0) || halvings < 0) throw std::invalid_argument("taylor_coefficients: bad steps");
  std::vector<double> out(order + 1);
  out[0] = f(0.0);
  const auto levels = static_cast<std::size_t>(halvings) + 1;
  for (std::size_t k = 1; k <= order; ++k) {
    // central k-th difference on the points (k/2 - j) h, j = 0..k
    auto estimate = [&](double h) {
      detail::CompensatedSum acc;
      for (std::size_t j = 0; j <= k; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const double x = (0.5 * static_cast<double>(k) - static_cast<double>(j)) * h;
        acc += sign * binomial(k, j) * f(x);
      }
      return acc.value() / std::pow(h, static_cast<double>(k));
    };
    std::vector<std::vector<double>> table(levels);
    double h = h0;
    for (std::size_t i = 0; i < levels; ++i, h *= 0.5) {
      table[i].push_back(estimate(h));
      double factor = 4.0;
      for (std::size_t j = 1; j <= i; ++j, factor *= 4.0) {
        table[i].push_back(table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0));
      }
    }
    out[k] = table.back().back() / factorial(k);
  }
  return out;
}

}  // namespace pmeans
