// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pmeans/figures.hpp"
#include "pmeans/partition.hpp"
#include "pmeans/pmean.hpp"
#include "pmeans/verify.hpp"

using namespace pmeans;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<AlphaTheta> exact_grid() {
  std::vector<AlphaTheta> grid;
  for (std::size_t m = 2; m <= 4; ++m) grid.emplace_back(-1.0, static_cast<double>(m));
  for (double theta : {0.5, 1.0, 2.0}) grid.emplace_back(0.0, theta);
  for (double alpha : {0.25, 0.5, 0.75}) {
    for (double theta : {-alpha / 2.0, 0.5, 2.0}) grid.emplace_back(alpha, theta);
  }
  return grid;
}

void report(int id, const std::string& title, Criterion& c) {
  std::printf("[%s] criterion %2d: %s: %s\n", c.passed ? "PASS" : "FAIL", id, title.c_str(),
              c.detail.str().c_str());
  std::fflush(stdout);
}

Criterion exact_suite() {
  Criterion c;
  const auto t0 = Clock::now();
  double worst_norm = 0.0;
  double worst_consistency = 0.0;
  for (const AlphaTheta& params : exact_grid()) {
    for (std::size_t n = 1; n <= 8; ++n) {
      double total = 0.0;
      for_each_composition(n, [&](const Composition& comp) {
        total += ecpf(params, comp);
        worst_consistency = std::max(worst_consistency, std::abs(consistency_residual(params, comp)));
      });
      worst_norm = std::max(worst_norm, std::abs(total - 1.0));
    }
  }
  const double elapsed = seconds_since(t0);
  c.detail << "max |sum ecpf - 1| = " << worst_norm << ", max consistency residual = " << worst_consistency
           << ", " << elapsed << " s";
  c.require(worst_norm <= 1e-12, "normalization");
  c.require(worst_consistency <= 1e-12, "consistency");
  c.require(elapsed < 10.0, "runtime");
  return c;
}

Criterion pgf_identity() {
  Criterion c;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const AlphaTheta& params : exact_grid()) {
    for (double v : {0.3, 0.7}) {
      const MomentVector m = exact_pmean_moments(make_ecpf_provider(params), MomentVector::constant(v, 10), 10);
      for (std::size_t n = 1; n <= 10; ++n) worst = std::max(worst, std::abs(m[n] - pgf_kn_moment(params, v, n)));
    }
  }
  const double elapsed = seconds_since(t0);
  c.detail << "max |E F(v)^n - E v^K_n| = " << worst << ", " << elapsed << " s";
  c.require(worst <= 1e-12, "identity");
  c.require(elapsed < 10.0, "runtime");
  return c;
}

Criterion dirichlet_beta(const CheckReport& r, double elapsed) {
  Criterion c;
  c.detail << "KS = " << r.statistic << " at n = " << r.n_samples << ", " << elapsed << " s";
  c.require(r.n_samples == 200000, "sample size");
  c.require(r.statistic <= 0.01, "KS <= 0.01");
  c.require(elapsed < 60.0, "runtime");
  return c;
}

Criterion darling_lamperti(const CheckReport& half) {
  Criterion c;
  boost::math::quadrature::tanh_sinh<double> integrator;
  double worst = 0.0;
  for (double alpha : {0.25, 0.5, 0.75}) {
    for (double p : {0.2, 0.5, 0.8}) {
      // u = v^{1/alpha} near each endpoint removes the integrable singularity
      auto piece = [&](double pp) {
        return integrator.integrate(
            [&](double v) {
              const double u = std::pow(v, 1.0 / alpha);
              if (!(u > 0.0)) return 0.0;
              return darling_lamperti_pdf(alpha, pp, u) * u / (alpha * v);
            },
            0.0, std::pow(0.5, alpha));
      };
      worst = std::max(worst, std::abs(piece(p) + piece(1.0 - p) - 1.0));
    }
  }
  CheckConfig cfg;
  cfg.n_samples = 200000;
  cfg.params = {{"alpha", 0.75}, {"p", 0.3}};
  const CheckReport skew = run_check("lamperti_density", cfg);
  c.detail << "max |integral - 1| = " << worst << ", KS(0.5, 0.5) = " << half.statistic
           << ", KS(0.75, 0.3) = " << skew.statistic;
  c.require(worst <= 1e-8, "normalization");
  c.require(half.statistic <= 0.01 && half.n_samples == 200000, "KS at (0.5, 0.5)");
  c.require(skew.statistic <= 0.01, "KS at (0.75, 0.3)");
  return c;
}

Criterion generic_transform(const CheckReport& default_cell) {
  Criterion c;
  std::vector<CheckReport> reports{default_cell};
  for (const auto& [alpha, theta] : std::vector<std::pair<double, double>>{{0.5, 2.0}, {0.25, 1.0}}) {
    CheckConfig cfg;
    cfg.n_samples = 200000;
    cfg.params = {{"alpha", alpha}, {"theta", theta}, {"p", 0.4}};
    reports.push_back(run_check("cs_transform", cfg));
  }
  c.detail << "max z over lambda in {0.5, 1, 4}:";
  for (const CheckReport& r : reports) {
    c.detail << " (" << r.params.at("alpha") << ", " << r.params.at("theta") << ") " << r.statistic;
    c.require(r.passed && r.statistic <= 3.0, "cs_transform");
    c.require(r.params.at("p") == 0.4 && r.n_samples == 200000, "configuration");
  }
  return c;
}

Criterion composition_rule(const CheckReport& r) {
  Criterion c;
  c.detail << "two-sample KS = " << r.statistic << " at n = " << r.n_samples;
  c.require(r.params.at("alpha") == 0.5 && r.params.at("theta") == 1.0, "parameters");
  c.require(r.n_samples == 100000, "sample size");
  c.require(r.statistic <= 0.015, "KS <= 0.015");
  return c;
}

Criterion stable_calculus(const CheckReport& mellin_half, const CheckReport& ml) {
  Criterion c;
  CheckConfig cfg;
  cfg.params = {{"alpha", 0.7}, {"r", -0.4}};
  const CheckReport mellin_neg = run_check("mellin_stable", cfg);
  const double diff = ml.extras.at("max_abs_diff");
  c.detail << "Mellin z(0.5, 0.5) = " << mellin_half.statistic << ", z(0.7, -0.4) = " << mellin_neg.statistic
           << ", ML survival max diff = " << diff << " at n = " << ml.n_samples;
  c.require(mellin_half.statistic <= 3.0, "Mellin (0.5, 0.5)");
  c.require(mellin_neg.statistic <= 3.0, "Mellin (0.7, -0.4)");
  c.require(ml.n_samples == 1000000 && ml.params.at("alpha") == 0.6, "ML configuration");
  c.require(diff <= 0.01, "ML survival");
  return c;
}

Criterion figures() {
  Criterion c;
  c.detail.precision(10);
  const double ac = alpha_critical();
  const double infl = inflection_abscissa();
  std::ostringstream bimodal;
  bool pattern = true;
  for (int k = 1; k <= 7; ++k) {
    const std::size_t changes = ratio_density_sign_changes(k / 8.0);
    bimodal << (k > 1 ? "," : "") << changes;
    pattern = pattern && (changes == 2) == (k >= 6);
  }
  c.detail << "alpha_c = " << ac << ", inflection = " << infl << ", sign changes k/8 = " << bimodal.str();
  c.require(std::abs(ac - 0.736484) <= 1e-5, "alpha_c");
  c.require(std::abs(infl - 0.278018) <= 1e-5, "inflection");
  c.require(pattern, "bimodality pattern");
  return c;
}

Criterion convex_order() {
  Criterion c;
  c.detail << "z:";
  for (const CheckReport& r : convex_order_checks(42, 100000)) {
    c.detail << " " << r.check_name << " " << r.statistic;
    c.require(r.passed, r.check_name);
  }
  return c;
}

Criterion sentinels(const std::map<std::string, CheckOutcome>& outcomes) {
  Criterion c;
  std::size_t failed = 0;
  for (const auto& [name, o] : outcomes) {
    if (!o.sentinel.passed) ++failed;
    c.require(!o.sentinel.passed, name + " sentinel passed");
    c.require(o.nominal.passed, name + " nominal failed");
  }
  c.detail << failed << " of " << outcomes.size() << " shifted targets rejected";
  c.require(outcomes.size() == check_names().size(), "registry coverage");
  return c;
}

}  // namespace

int main() {
  // every registered check at its defaults, with its sentinel
  std::map<std::string, CheckOutcome> outcomes;
  std::map<std::string, double> elapsed;
  for (const std::string& name : check_names()) {
    const auto t0 = Clock::now();
    outcomes.emplace(name, run_check_with_sentinel(name, CheckConfig{}));
    elapsed[name] = seconds_since(t0);
  }

  std::vector<std::pair<std::string, std::function<Criterion()>>> criteria{
      {"exact ECPF normalization and consistency", exact_suite},
      {"moment / PGF identity", pgf_identity},
      {"Dirichlet mean beta law",
       [&] { return dirichlet_beta(outcomes.at("dirichlet_beta").nominal, elapsed.at("dirichlet_beta")); }},
      {"Darling-Lamperti density", [&] { return darling_lamperti(outcomes.at("lamperti_density").nominal); }},
      {"generic Cauchy-Stieltjes transform", [&] { return generic_transform(outcomes.at("cs_transform").nominal); }},
      {"composition rule", [&] { return composition_rule(outcomes.at("composition_rule").nominal); }},
      {"stable calculus",
       [&] { return stable_calculus(outcomes.at("mellin_stable").nominal, outcomes.at("ml_survival").nominal); }},
      {"figure reproduction", figures},
      {"convex-order properties", convex_order},
      {"corruption sentinels", [&] { return sentinels(outcomes); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail << " [exception: " << e.what() << "]";
    }
    report(static_cast<int>(i + 1), criteria[i].first, c);
    failures += !c.passed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
