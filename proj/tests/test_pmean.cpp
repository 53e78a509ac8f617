#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "pmeans/pmean.hpp"
#include "pmeans/sampling.hpp"
#include "pmeans/specialfn.hpp"
#include "support.hpp"

using namespace pmeans;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<AlphaTheta> parameter_grid() {
  return {AlphaTheta(0.0, 0.5), AlphaTheta(0.0, 2.0),  AlphaTheta(0.3, 0.0), AlphaTheta(0.5, 1.0),
          AlphaTheta(0.8, -0.5), AlphaTheta::finite(2, 2.0), AlphaTheta::finite(5, 1.5)};
}

// Moments of the mean of m i.i.d. copies by brute force over all m-tuples.
std::vector<double> brute_mean_moments(const AtomicDistribution& x, std::size_t m, std::size_t n) {
  const std::size_t s = x.values().size();
  std::size_t tuples = 1;
  for (std::size_t i = 0; i < m; ++i) tuples *= s;
  std::vector<double> out(n, 0.0);
  for (std::size_t code = 0; code < tuples; ++code) {
    double sum = 0.0;
    double prob = 1.0;
    std::size_t c = code;
    for (std::size_t i = 0; i < m; ++i, c /= s) {
      sum += x.values()[c % s];
      prob *= x.probs()[c % s];
    }
    const double mean = sum / static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) out[j] += prob * std::pow(mean, static_cast<double>(j + 1));
  }
  return out;
}

}  // namespace

TEST_CASE("AtomicDistribution") {
  const AtomicDistribution x({-1.0, 0.5, 2.0}, {0.2, 0.5, 0.3});
  CHECK(x.mean() == doctest::Approx(-0.2 + 0.25 + 0.6));
  CHECK(x.moment(2) == doctest::Approx(0.2 + 0.125 + 1.2));
  CHECK(x.expect([](double v) { return v * v; }) == doctest::Approx(x.moment(2)));
  CHECK_FALSE(x.nonnegative());
  CHECK(AtomicDistribution::bernoulli(0.3).nonnegative());
  CHECK(AtomicDistribution::bernoulli(1.0).values() == std::vector<double>{1.0});
  CHECK(AtomicDistribution::point_mass(2.5).moment(3) == doctest::Approx(15.625));
  CHECK_THROWS_AS(AtomicDistribution({1.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(AtomicDistribution({1.0, 2.0}, {0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(AtomicDistribution({1.0, 2.0}, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(AtomicDistribution({1.0}, {0.5, 0.5}), std::invalid_argument);

  RngStream rng(1, 0);
  testing::check_mean(testing::draw(100000, [&] { return x.sample(rng); }), x.mean());
}

TEST_CASE("exact P-mean moments") {
  for (const AlphaTheta& params : parameter_grid()) {
    const MomentVector ones = exact_pmean_moments(make_ecpf_provider(params), MomentVector::constant(1.0, 8), 8);
    for (double m : ones.moments) CHECK(std::abs(m - 1.0) <= 1e-12);
  }
  // (0, 1) mean of Bernoulli(1/2) is beta(1/2, 1/2)
  const MomentVector b = exact_pmean_moments(make_ecpf_provider(AlphaTheta(0.0, 1.0)),
                                             MomentVector::constant(0.5, 4), 4);
  CHECK(b[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b[2] == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(b[4] == doctest::Approx(0.5 * 1.5 * 2.5 * 3.5 / (1.0 * 2.0 * 3.0 * 4.0)).epsilon(1e-14));

  // uniform on 4 points, centered X: E X~^2 = E X^2 / 4
  const AtomicDistribution centered({-1.0, 2.0}, {2.0 / 3.0, 1.0 / 3.0});
  const MomentVector u = exact_pmean_moments(make_uniform_ecpf_provider(4), MomentVector::of(centered, 2), 2);
  CHECK(u[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(u[2] == doctest::Approx(centered.moment(2) / 4.0).epsilon(1e-14));

  // (0, theta) mean of Bernoulli(p) is beta(p theta, q theta)
  const double theta = 2.0;
  const double p = 0.3;
  const MomentVector d = exact_pmean_moments(make_ecpf_provider(AlphaTheta(0.0, theta)),
                                             MomentVector::constant(p, 10), 10);
  for (std::size_t j = 1; j <= 10; ++j) {
    CHECK(d[j] == doctest::Approx(pochhammer(p * theta, j) / pochhammer(theta, j)).epsilon(1e-12));
  }
  CHECK_THROWS(exact_pmean_moments(make_ecpf_provider(AlphaTheta(0.0, 1.0)), MomentVector::constant(1.0, 3), 4));
  CHECK_THROWS(exact_pmean_moments(make_ecpf_provider(AlphaTheta(0.0, 1.0)),
                                   MomentVector::constant(1.0, 30), kMaxEnumerationOrder + 1));
}

TEST_CASE("classical mean moments") {
  const AtomicDistribution x({-1.0, 0.5, 2.0}, {0.2, 0.5, 0.3});
  const MomentVector mx = MomentVector::of(x, 6);
  const MomentVector one = classical_mean_moments(1, mx, 6);
  for (std::size_t j = 1; j <= 6; ++j) CHECK(one[j] == doctest::Approx(mx[j]).epsilon(1e-14));

  for (std::size_t m : {2, 3, 5}) {
    const auto brute = brute_mean_moments(x, m, 6);
    const MomentVector c = classical_mean_moments(m, mx, 6);
    const MomentVector e = exact_pmean_moments(make_uniform_ecpf_provider(m), mx, 6);
    for (std::size_t j = 1; j <= 6; ++j) {
      CHECK(std::abs(c[j] - brute[j - 1]) <= 1e-12);
      CHECK(std::abs(c[j] - e[j]) <= 1e-12);
    }
  }

  // centered: E M^4 = (3 (m - 1) sigma^4 + E X^4) / m^3
  const AtomicDistribution centered({-1.0, 2.0}, {2.0 / 3.0, 1.0 / 3.0});
  const double s2 = centered.moment(2);
  for (std::size_t m : {1, 4, 9}) {
    const double md = static_cast<double>(m);
    const MomentVector c = classical_mean_moments(m, MomentVector::of(centered, 4), 4);
    CHECK(c[4] == doctest::Approx((3.0 * (md - 1.0) * s2 * s2 + centered.moment(4)) / (md * md * md)).epsilon(1e-12));
  }

  RngStream rng(2, 0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> v(4);
    for (double& a : v) a = rng.uniform() * 4.0 - 2.0;
    const AtomicDistribution r(v, {0.1, 0.2, 0.3, 0.4});
    const MomentVector c = classical_mean_moments(3, MomentVector::of(r, 6), 6);
    const MomentVector e = exact_pmean_moments(make_uniform_ecpf_provider(3), MomentVector::of(r, 6), 6);
    for (std::size_t j = 1; j <= 6; ++j) CHECK(std::abs(c[j] - e[j]) <= 1e-12);
  }
}

TEST_CASE("product moments") {
  // exchangeable mu reproduces the P-mean moments
  const AtomicDistribution x({0.0, 1.0, 3.0}, {0.3, 0.3, 0.4});
  for (const AlphaTheta& params : parameter_grid()) {
    const EppfFunction p = [&](const std::vector<std::size_t>& sizes) {
      return std::exp(log_eppf(params, sizes));
    };
    const MomentVector e = exact_pmean_moments(make_ecpf_provider(params), MomentVector::of(x, 6), 6);
    for (std::size_t n = 1; n <= 6; ++n) {
      const double pm = product_moment(p, n, [&](const std::vector<std::size_t>& block) {
        return x.moment(block.size());
      });
      CHECK(pm == doctest::Approx(e[n]).epsilon(1e-12));
    }
  }
  // E[X~ Y~] with Y = X^2 under (0, 1): p(2) E X^3 + p(1, 1) E X E X^2
  const AlphaTheta ewens(0.0, 1.0);
  const EppfFunction p = [&](const std::vector<std::size_t>& sizes) { return std::exp(log_eppf(ewens, sizes)); };
  const double pm = product_moment(p, 2, [&](const std::vector<std::size_t>& block) {
    std::size_t power = 0;
    for (std::size_t i : block) power += i + 1;
    return x.moment(power);
  });
  CHECK(pm == doctest::Approx(0.5 * x.moment(3) + 0.5 * x.moment(1) * x.moment(2)).epsilon(1e-14));
  CHECK_THROWS(product_moment(p, kMaxProductMomentOrder + 1, [](const std::vector<std::size_t>&) { return 1.0; }));
}

TEST_CASE("PGF of K_n") {
  for (const AlphaTheta& params : parameter_grid()) {
    for (std::size_t n = 1; n <= 6; ++n) CHECK(pgf_kn_moment(params, 1.0, n) == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : {0.1, 0.5, 0.9}) {
      const MomentVector e = exact_pmean_moments(make_ecpf_provider(params), MomentVector::constant(v, 10), 10);
      for (std::size_t n = 1; n <= 10; ++n) {
        CHECK(std::abs(pgf_kn_moment(params, v, n) - e[n]) <= 1e-12);
      }
    }
  }
  CHECK(pgf_kn_moment(AlphaTheta(0.0, 1.0), 0.5, 2) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(pgf_kn_moment(AlphaTheta(0.0, 2.0), 0.3, 3) ==
        doctest::Approx(pochhammer(0.6, 3) / pochhammer(2.0, 3)).epsilon(1e-14));
}

TEST_CASE("mc_pmean") {
  RngStream rng(3, 0);
  const XSampler bern = [](RngStream& g) { return g.uniform() < 0.3 ? 1.0 : 0.0; };
  const XSampler normal = [](RngStream& g) { return g.normal(); };

  RandomDiscreteSample unit;
  unit.weights = {1.0};
  RngStream a(4, 0);
  RngStream b(4, 0);
  CHECK(mc_pmean([&](RngStream&) { return unit; }, normal, 0.0, a) == normal(b));

  RandomDiscreteSample empty;
  empty.weights = {0.0, 0.0};
  empty.defect = 1.0;
  CHECK(mc_pmean([&](RngStream&) { return empty; }, normal, 0.75, rng) == 0.75);

  const AlphaTheta params(0.0, 2.0);
  const PFactory gem = [&](RngStream& g) { return gem_stick_break(params, 1e-10, g); };
  const auto m = testing::draw(100000, [&] { return mc_pmean(gem, bern, 0.3, rng); });
  testing::check_ks(m, [](double u) { return boost::math::ibeta(0.6, 1.4, std::clamp(u, 0.0, 1.0)); });
}

TEST_CASE("Darling-Lamperti density") {
  CHECK(darling_lamperti_pdf(0.5, 0.5, 0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
  CHECK(darling_lamperti_pdf(0.3, 0.2, 0.7) == doctest::Approx(darling_lamperti_pdf(0.3, 0.8, 0.3)).epsilon(1e-14));
  CHECK(darling_lamperti_pdf(0.6, 0.25, 0.3) == doctest::Approx(0.82821816312739528734).epsilon(1e-13));
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (const auto& [alpha, p] : std::vector<std::pair<double, double>>{{0.6, 0.25}, {0.2, 0.5}, {0.9, 0.1}}) {
    // u = v^{1/alpha} on each half tames the u^{alpha-1} endpoint singularities
    auto moment = [&](int k) {
      auto lower = [&](double v) {
        const double u = std::pow(v, 1.0 / alpha);
        if (!(u > 0.0)) return 0.0;
        return std::pow(u, k) * darling_lamperti_pdf(alpha, p, u) * u / (alpha * v);
      };
      auto upper = [&](double v) {
        const double w = std::pow(v, 1.0 / alpha);
        if (!(w > 0.0)) return 0.0;
        // pdf(alpha, p, 1 - w) = pdf(alpha, 1 - p, w), resolved near w = 0
        return std::pow(1.0 - w, k) * darling_lamperti_pdf(alpha, 1.0 - p, w) * w / (alpha * v);
      };
      const double half = std::pow(0.5, alpha);
      return integrator.integrate(lower, 0.0, half) + integrator.integrate(upper, 0.0, half);
    };
    INFO("alpha " << alpha << " p " << p);
    CHECK(std::abs(moment(0) - 1.0) <= 1e-8);
    // the mean of the law is p
    CHECK(std::abs(moment(1) - p) <= 1e-8);
    CHECK(darling_lamperti_cdf(alpha, p, 0.5) == doctest::Approx(1.0 - darling_lamperti_cdf(alpha, 1.0 - p, 0.5)).epsilon(1e-10));
  }
  CHECK(darling_lamperti_cdf(0.6, 0.25, 0.3) == doctest::Approx(0.69948151071084927991).epsilon(1e-10));
  CHECK(darling_lamperti_cdf(0.5, 0.5, 0.2) == doctest::Approx(0.29516723530086655).epsilon(1e-10));
  CHECK(darling_lamperti_cdf(0.5, 0.5, 0.8) == doctest::Approx(1.0 - 0.29516723530086655).epsilon(1e-10));
  CHECK_THROWS_AS(darling_lamperti_pdf(0.5, 0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(darling_lamperti_pdf(0.5, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(darling_lamperti_pdf(1.0, 0.5, 0.5), std::domain_error);
}

TEST_CASE("Lamperti Stieltjes transform") {
  CHECK(lamperti_stieltjes(0.4, 0.3, 0.0) == 1.0);
  CHECK(lamperti_stieltjes(0.4, 1.0, 3.0) == doctest::Approx(0.25).epsilon(1e-15));
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (double lambda : {1.0, 5.0}) {
    const double quad = integrator.integrate(
        [&](double u) { return darling_lamperti_pdf(0.5, 0.5, u) / (1.0 + lambda * u); }, 0.0, 1.0);
    CHECK(std::abs(quad - lamperti_stieltjes(0.5, 0.5, lambda)) <= 1e-6);
  }
  CHECK(lamperti_stieltjes(0.5, 0.5, 1.0) == doctest::Approx(0.7071067811865475244).epsilon(1e-14));
}

TEST_CASE("generic Cauchy-Stieltjes transform") {
  const AlphaTheta params(0.4, 1.5);
  CHECK(cs_transform_rhs(params, AtomicDistribution::point_mass(2.0), 1.0) ==
        doctest::Approx(std::pow(3.0, -1.5)).epsilon(1e-14));
  CHECK(cs_transform_rhs(params, AtomicDistribution::bernoulli(0.3), 0.0) == 1.0);
  // symmetric Dirichlet(1, 1) weights, Bernoulli(1/2) atoms:
  // 1/4 + 1/4 * 1/4 + 1/2 * int_0^1 (1 + u)^{-2} du
  CHECK(cs_transform_rhs(AlphaTheta::finite(2, 2.0), AtomicDistribution::bernoulli(0.5), 1.0) ==
        doctest::Approx(0.5625).epsilon(1e-14));
  CHECK_THROWS(cs_transform_rhs(AlphaTheta(0.0, 1.0), AtomicDistribution::bernoulli(0.5), 1.0));
  CHECK_THROWS(cs_transform_rhs(AlphaTheta(0.5, 0.0), AtomicDistribution::bernoulli(0.5), 1.0));
  CHECK_THROWS(cs_transform_rhs(params, AtomicDistribution::bernoulli(0.5), -2.0));

  RngStream rng(5, 0);
  // MC over GEM(0.4, 1.5) means of Bernoulli(0.3)
  const XSampler bern = [](RngStream& g) { return g.uniform() < 0.3 ? 1.0 : 0.0; };
  const PFactory gem = [&](RngStream& g) { return gem_stick_break(params, StickTruncation{1e-6, 256}, g); };
  const auto v = testing::draw(50000, [&] { return std::pow(1.0 + 2.0 * mc_pmean(gem, bern, 0.3, rng), -1.5); });
  testing::check_mean(v, cs_transform_rhs(params, AtomicDistribution::bernoulli(0.3), 2.0));
}

TEST_CASE("Dirichlet log transform") {
  const AtomicDistribution b = AtomicDistribution::bernoulli(0.5);
  CHECK(dirichlet_log_transform(2.0, b, 0.0) == 1.0);
  CHECK(dirichlet_log_transform(2.0, b, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  RngStream rng(6, 0);
  const auto v = testing::draw(100000, [&] { return std::pow(1.0 + sample_beta(1.0, 1.0, rng), -2.0); });
  testing::check_mean(v, dirichlet_log_transform(2.0, b, 1.0));

  // the finite regime approaches it as m grows, error halving with m
  const double theta = 1.0;
  const AtomicDistribution x = AtomicDistribution::bernoulli(0.3);
  const double limit = dirichlet_log_transform(theta, x, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m <= 256; m *= 2) {
    const double err = std::abs(cs_transform_rhs(AlphaTheta::finite(m, theta), x, 1.0) - limit);
    CHECK(err < prev);
    if (m > 1) CHECK(err / prev == doctest::Approx(0.5).epsilon(0.05));
    prev = err;
  }
  CHECK(std::abs(cs_transform_rhs(AlphaTheta::finite(65536, theta), x, 1.0) - limit) <= 1e-6);
}

TEST_CASE("alpha = 0 transforms") {
  const Alpha0Transform t = alpha0_transform(0.5, AtomicDistribution::bernoulli(0.3), 2.0);
  CHECK(t.stieltjes_form == doctest::Approx(lamperti_stieltjes(0.5, 0.3, 2.0)).epsilon(1e-15));
  const Alpha0Transform zero = alpha0_transform(0.5, AtomicDistribution::bernoulli(0.3), 0.0);
  CHECK(zero.log_form == 0.0);
  CHECK(zero.stieltjes_form == 1.0);
  const Alpha0Transform c = alpha0_transform(0.7, AtomicDistribution::point_mass(1.5), 2.0);
  CHECK(c.log_form == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(c.stieltjes_form == doctest::Approx(0.25).epsilon(1e-14));

  // E log(1 + lambda M) for the arcsine law
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double quad = integrator.integrate(
      [](double u) { return std::log1p(2.0 * u) * darling_lamperti_pdf(0.5, 0.3, u); }, 0.0, 1.0);
  CHECK(std::abs(quad - t.log_form) <= 1e-8);
}

TEST_CASE("Taylor coefficients") {
  const auto e = taylor_coefficients([](double x) { return std::exp(x); }, 5);
  double fact = 1.0;
  for (std::size_t k = 0; k <= 5; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    CHECK(std::abs(e[k] - 1.0 / fact) <= 1e-7);
  }
  const auto g = taylor_coefficients([](double x) { return 1.0 / (1.0 - x); }, 4, 0.1);
  for (double c : g) CHECK(std::abs(c - 1.0) <= 1e-7);
}

TEST_CASE("transform coefficients are the P-mean moments") {
  // (1 + lambda X~)^{-theta} = sum_n (-1)^n (theta)_n E X~^n lambda^n / n!
  const AtomicDistribution x({0.0, 0.5, 1.0}, {0.3, 0.5, 0.2});
  for (const AlphaTheta& params : {AlphaTheta(0.5, 1.0), AlphaTheta(0.25, 2.0), AlphaTheta(0.75, 0.5),
                                   AlphaTheta::finite(3, 1.5), AlphaTheta::finite(2, 2.0)}) {
    const auto coeffs = taylor_coefficients(
        [&](double lambda) { return cs_transform_rhs(params, x, lambda); }, 4);
    const MomentVector mom = exact_pmean_moments(make_ecpf_provider(params), MomentVector::of(x, 4), 4);
    double fact = 1.0;
    for (std::size_t n = 1; n <= 4; ++n) {
      fact *= static_cast<double>(n);
      const double expected = (n % 2 ? -1.0 : 1.0) * pochhammer(params.theta(), n) * mom[n] / fact;
      INFO("alpha " << params.alpha() << " n " << n);
      CHECK(std::abs(coeffs[n] - expected) <= 1e-6);
    }
  }
  const double theta = 2.0;
  const auto coeffs = taylor_coefficients([&](double l) { return dirichlet_log_transform(theta, x, l); }, 4);
  const MomentVector mom = exact_pmean_moments(make_ecpf_provider(AlphaTheta(0.0, theta)), MomentVector::of(x, 4), 4);
  double fact = 1.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    fact *= static_cast<double>(n);
    CHECK(std::abs(coeffs[n] - (n % 2 ? -1.0 : 1.0) * pochhammer(theta, n) * mom[n] / fact) <= 1e-6);
  }
}
