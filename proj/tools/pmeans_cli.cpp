// pmeans: command-line front end for the pmeans library.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pmeans/discrete.hpp"
#include "pmeans/figures.hpp"
#include "pmeans/io.hpp"
#include "pmeans/partition.hpp"
#include "pmeans/pmean.hpp"
#include "pmeans/specialfn.hpp"
#include "pmeans/verify.hpp"

namespace {

using nlohmann::json;
using pmeans::format_real;

struct RunConfig {
  std::uint64_t seed = 42;
  std::size_t samples = 1;
  std::string format = "json";
  std::string out;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* app, RunConfig& cfg, bool random) {
  if (random) {
    app->add_option("--seed", cfg.seed, "random seed");
    app->add_option("--samples", cfg.samples, "number of samples")->check(CLI::PositiveNumber);
  }
  app->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", cfg.out, "output path (default stdout)");
}

/// Writes a table either as CSV with a leading comment or as JSON lines.
void write_table(const RunConfig& cfg, const std::string& comment,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  Output out(cfg.out);
  std::ostream& os = out.stream();
  if (cfg.format == "csv") {
    os << "# " << comment << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_real(row[i]);
      os << "\n";
    }
  } else {
    for (const auto& row : rows) {
      json j{{"schema", pmeans::kSchemaVersion}};
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (std::isfinite(row[i]) && std::trunc(row[i]) == row[i] && std::abs(row[i]) < 0x1p53) {
          j[header[i]] = static_cast<std::int64_t>(row[i]);
        } else if (std::isfinite(row[i])) {
          j[header[i]] = row[i];
        } else {
          j[header[i]] = nullptr;
        }
      }
      os << j.dump() << "\n";
    }
  }
}

void write_value(const RunConfig& cfg, const std::string& comment, double value) {
  Output out(cfg.out);
  if (cfg.format == "csv") {
    out.stream() << "# " << comment << "\nvalue\n" << format_real(value) << "\n";
  } else {
    out.stream() << json{{"schema", pmeans::kSchemaVersion}, {"value", value}}.dump() << "\n";
  }
}

struct ModelOptions {
  double alpha = 0.0;
  double theta = 1.0;
  std::size_t uniform_m = 0;

  void add(CLI::App* app, bool allow_uniform) {
    app->add_option("--alpha", alpha, "alpha");
    app->add_option("--theta", theta, "theta");
    if (allow_uniform) {
      app->add_option("--uniform-m", uniform_m, "use sampling from the uniform law on m points");
    }
  }
  pmeans::EcpfProvider provider() const {
    if (uniform_m > 0) return pmeans::make_uniform_ecpf_provider(uniform_m);
    return pmeans::make_ecpf_provider(pmeans::AlphaTheta(alpha, theta));
  }
};

struct XOptions {
  std::optional<double> bernoulli;
  std::string values;
  std::string probs;

  void add(CLI::App* app) {
    app->add_option("--bernoulli", bernoulli, "X ~ Bernoulli(p)");
    app->add_option("--values", values, "support of X, comma separated");
    app->add_option("--probs", probs, "probabilities of X, comma separated");
  }
  pmeans::AtomicDistribution get() const {
    if (bernoulli) return pmeans::AtomicDistribution::bernoulli(*bernoulli);
    if (values.empty()) throw CLI::ValidationError("X", "give --bernoulli or --values/--probs");
    return pmeans::AtomicDistribution(pmeans::parse_real_list(values),
                                      pmeans::parse_real_list(probs));
  }
};

int cmd_sample(const std::string& model, const RunConfig& cfg, const ModelOptions& mo,
               const std::string& theta_list, const std::string& kind, const std::string& lengths,
               std::optional<pmeans::StickTruncation> trunc) {
  // without explicit flags, follow the Monte Carlo policy of the checks
  auto truncation = [&](const pmeans::AlphaTheta& params) {
    return trunc ? *trunc : pmeans::mc_truncation(params);
  };
  pmeans::RngStream rng(cfg.seed, 0);
  Output out(cfg.out);
  std::ostream& os = out.stream();
  if (cfg.format == "csv") {
    os << "# random discrete distributions: sample,defect,order,weights (';' separated)\n";
    os << "sample,defect,order,weights\n";
  }
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    pmeans::RandomDiscreteSample p;
    if (model == "gem") {
      const pmeans::AlphaTheta params(mo.alpha, mo.theta);
      p = pmeans::gem_stick_break(params, truncation(params), rng);
    } else if (model == "dirichlet") {
      p = pmeans::dirichlet_finite(pmeans::parse_real_list(theta_list), rng);
    } else if (model == "stable_jumps") {
      const pmeans::AlphaTheta params(mo.alpha, 0.0);
      p = pmeans::rank_decreasing(pmeans::gem_stick_break(params, truncation(params), rng));
    } else {
      pmeans::SubordinatorKind k = pmeans::GammaSubordinator{};
      if (kind == "stable") {
        k = pmeans::StableSubordinator{mo.alpha};
      } else if (kind != "gamma") {
        throw CLI::ValidationError("--kind", "expected gamma or stable");
      }
      p = pmeans::subordinator_increments(k, pmeans::parse_real_list(lengths), rng);
    }
    if (cfg.format == "csv") {
      os << i << "," << format_real(p.defect) << "," << pmeans::to_string(p.order) << ",";
      for (std::size_t j = 0; j < p.weights.size(); ++j) {
        os << (j ? ";" : "") << format_real(p.weights[j]);
      }
      os << "\n";
    } else {
      os << pmeans::to_json(p).dump() << "\n";
    }
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, bool explicit_samples, std::vector<std::string> checks,
               bool all, bool grid, bool sentinel, const std::vector<std::string>& param_args) {
  if (all) checks = pmeans::check_names();
  if (checks.empty()) throw CLI::ValidationError("verify", "give --check NAME or --all");
  pmeans::CheckParams overrides;
  for (const auto& a : param_args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--param", "expected key=value");
    overrides[a.substr(0, eq)] = pmeans::parse_real_list(a.substr(eq + 1)).at(0);
  }
  Output out(cfg.out);
  bool ok = true;
  for (const auto& name : checks) {
    std::vector<pmeans::CheckParams> cells{overrides};
    if (grid) {
      cells = pmeans::default_grid(name);
      for (auto& c : cells) {
        for (const auto& [k, v] : overrides) c[k] = v;
      }
    }
    for (const auto& cell : cells) {
      pmeans::CheckConfig config{cfg.seed, explicit_samples ? cfg.samples : 0, cell};
      const pmeans::CheckOutcome r = pmeans::run_check_with_sentinel(name, config);
      out.stream() << pmeans::to_json(r.nominal).dump() << "\n";
      ok = ok && r.nominal.passed;
      if (sentinel) {
        out.stream() << pmeans::to_json(r.sentinel).dump() << "\n";
        ok = ok && !r.sentinel.passed;
      }
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random discrete distributions and their P-means"};
  app.require_subcommand(1);
  RunConfig cfg;
  ModelOptions mo;
  XOptions xo;

  // sample
  auto* sample = app.add_subcommand("sample", "draw random discrete distributions");
  std::string model = "gem";
  std::string theta_list;
  std::string kind = "gamma";
  std::string lengths;
  double trunc_tol = pmeans::kDefaultTruncTol;
  std::size_t max_atoms = 0;
  sample->add_option("model", model, "gem | dirichlet | stable_jumps | subordinator")
      ->required()
      ->check(CLI::IsMember({"gem", "dirichlet", "stable_jumps", "subordinator"}));
  sample->add_option("--alpha", mo.alpha, "alpha (gem, stable_jumps, stable subordinator)");
  sample->add_option("--theta", theta_list, "theta (gem) or comma separated list (dirichlet)");
  sample->add_option("--kind", kind, "subordinator kind: gamma | stable");
  sample->add_option("--lengths", lengths, "subordinator interval lengths, comma separated");
  sample->add_option("--trunc-tol", trunc_tol,
                     "stick truncation tolerance (default: 1e-8, or min(1e-6, 1e-4^(1/alpha)) with 256 atoms when alpha > 0)");
  sample->add_option("--max-atoms", max_atoms, "cap on stick atoms (0: none)");
  add_common(sample, cfg, true);

  // eppf / ecpf
  std::string composition;
  auto* eppf = app.add_subcommand("eppf", "exchangeable partition probability function");
  mo.add(eppf, false);
  eppf->add_option("--composition", composition, "block sizes, comma separated")->required();
  add_common(eppf, cfg, false);
  auto* ecpf = app.add_subcommand("ecpf", "exchangeable composition probability function");
  mo.add(ecpf, true);
  ecpf->add_option("--composition", composition, "block sizes, comma separated")->required();
  add_common(ecpf, cfg, false);

  // kn
  std::size_t n = 1;
  std::string method = "enumerate";
  auto* kn = app.add_subcommand("kn", "law of the number of blocks K_n");
  mo.add(kn, true);
  kn->add_option("--n", n, "sample size")->required();
  kn->add_option("--method", method, "enumerate | recursive")
      ->check(CLI::IsMember({"enumerate", "recursive"}));
  add_common(kn, cfg, false);

  // crp
  auto* crp = app.add_subcommand("crp", "sequential partition sampler");
  mo.add(crp, false);
  crp->add_option("--n", n, "number of indices")->required();
  add_common(crp, cfg, true);

  // moments
  std::size_t order = 4;
  std::size_t classical_m = 0;
  auto* moments = app.add_subcommand("moments", "exact moments of P-means");
  mo.add(moments, true);
  xo.add(moments);
  moments->add_option("--order", order, "highest moment");
  moments->add_option("--classical-m", classical_m, "arithmetic mean of m copies instead");
  add_common(moments, cfg, false);

  // density
  std::string density_kind = "stable_ratio";
  double p = 0.5;
  std::string at;
  auto* density = app.add_subcommand("density", "closed-form densities");
  density
      ->add_option("--kind", density_kind,
                   "talzol | stable | stable_ratio | stable_ratio_power | darling_lamperti")
      ->check(CLI::IsMember(
          {"talzol", "stable", "stable_ratio", "stable_ratio_power", "darling_lamperti"}));
  density->add_option("--alpha", mo.alpha, "alpha");
  density->add_option("--p", p, "p (darling_lamperti)");
  density->add_option("--at", at, "abscissae, comma separated")->required();
  add_common(density, cfg, false);

  // transform
  std::string transform_kind = "cs";
  std::string lambdas = "0.5,1,4";
  auto* transform = app.add_subcommand("transform", "Cauchy-Stieltjes transforms of P-means");
  transform->add_option("--kind", transform_kind, "cs | dirichlet_log | alpha0 | lamperti")
      ->check(CLI::IsMember({"cs", "dirichlet_log", "alpha0", "lamperti"}));
  mo.add(transform, false);
  xo.add(transform);
  transform->add_option("--lambda", lambdas, "lambda values, comma separated");
  add_common(transform, cfg, false);

  // figure
  std::string figure_name;
  std::size_t points = 200;
  auto* figure = app.add_subcommand("figure", "data for the R_alpha density figures");
  figure->add_option("name", figure_name, "ratio_densities | discriminant")
      ->required()
      ->check(CLI::IsMember({"ratio_densities", "discriminant"}));
  figure->add_option("--points", points, "grid resolution")->check(CLI::PositiveNumber);
  add_common(figure, cfg, false);

  // verify
  std::vector<std::string> checks;
  std::vector<std::string> param_args;
  bool all = false;
  bool grid = false;
  bool sentinel = false;
  auto* verify = app.add_subcommand("verify", "Monte Carlo identity checks");
  verify->add_option("--check", checks, "check name (repeatable)")
      ->check(CLI::IsMember(pmeans::check_names()));
  verify->add_flag("--all", all, "run every registered check");
  verify->add_flag("--grid", grid, "sweep each check over the default parameter grid");
  verify->add_flag("--sentinel", sentinel, "also report runs against shifted targets");
  verify->add_option("--param", param_args, "parameter override key=value (repeatable)");
  add_common(verify, cfg, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version exit 0; usage errors share the generic error status
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*sample) {
      if (model == "gem") mo.theta = theta_list.empty() ? 1.0 : pmeans::parse_real_list(theta_list).at(0);
      if (model == "dirichlet" && theta_list.empty()) {
        throw CLI::ValidationError("--theta", "dirichlet needs a list of parameters");
      }
      std::optional<pmeans::StickTruncation> trunc;
      if (sample->count("--trunc-tol") > 0 || sample->count("--max-atoms") > 0) {
        trunc = pmeans::StickTruncation{trunc_tol, max_atoms};
      }
      return cmd_sample(model, cfg, mo, theta_list, kind, lengths, trunc);
    }
    if (*eppf) {
      write_value(cfg, "EPPF of the (alpha, theta) model",
                  pmeans::eppf(pmeans::AlphaTheta(mo.alpha, mo.theta), pmeans::parse_composition(composition)));
      return 0;
    }
    if (*ecpf) {
      write_value(cfg, "exchangeable composition probability",
                  mo.provider()(pmeans::parse_composition(composition)));
      return 0;
    }
    if (*kn) {
      std::vector<double> dist;
      if (method == "recursive") {
        if (mo.uniform_m > 0) throw CLI::ValidationError("--method", "recursive needs (alpha, theta)");
        dist = pmeans::kn_distribution_recursive(pmeans::AlphaTheta(mo.alpha, mo.theta), n);
      } else {
        dist = pmeans::kn_distribution(mo.provider(), n);
      }
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k < dist.size(); ++k) rows.push_back({double(k + 1), dist[k]});
      write_table(cfg, "P(K_n = k), sum of the ECPF over compositions of n into k parts",
                  {"k", "probability"}, rows);
      return 0;
    }
    if (*crp) {
      const pmeans::AlphaTheta params(mo.alpha, mo.theta);
      pmeans::RngStream rng(cfg.seed, 0);
      Output out(cfg.out);
      if (cfg.format == "csv") out.stream() << "# sequential partition: block sizes in order of appearance\nsample,block_sizes\n";
      for (std::size_t i = 0; i < cfg.samples; ++i) {
        const pmeans::BlockState s = pmeans::crp_sample(params, n, rng);
        if (cfg.format == "csv") {
          out.stream() << i << ",";
          for (std::size_t j = 0; j < s.block_sizes.size(); ++j) {
            out.stream() << (j ? ";" : "") << s.block_sizes[j];
          }
          out.stream() << "\n";
        } else {
          out.stream() << json{{"schema", pmeans::kSchemaVersion}, {"block_sizes", s.block_sizes}}.dump()
                       << "\n";
        }
      }
      return 0;
    }
    if (*moments) {
      const pmeans::AtomicDistribution x = xo.get();
      const pmeans::MomentVector mx = pmeans::MomentVector::of(x, order);
      const pmeans::MomentVector m = classical_m > 0
                                         ? pmeans::classical_mean_moments(classical_m, mx, order)
                                         : pmeans::exact_pmean_moments(mo.provider(), mx, order);
      std::vector<std::vector<double>> rows;
      for (std::size_t j = 1; j <= order; ++j) rows.push_back({double(j), m[j]});
      write_table(cfg,
                  classical_m > 0 ? "moments of the arithmetic mean of m i.i.d. copies"
                                  : "E X~^j = sum over compositions of j of ECPF * prod E X^{n_i}",
                  {"order", "moment"}, rows);
      return 0;
    }
    if (*density) {
      std::vector<std::vector<double>> rows;
      for (double v : pmeans::parse_real_list(at)) {
        double d = 0.0;
        if (density_kind == "talzol") d = pmeans::talzol_pdf(mo.alpha, v);
        if (density_kind == "stable") d = pmeans::stable_pdf(mo.alpha, v);
        if (density_kind == "stable_ratio") d = pmeans::stable_ratio_pdf(mo.alpha, v);
        if (density_kind == "stable_ratio_power") d = pmeans::stable_ratio_power_pdf(mo.alpha, v);
        if (density_kind == "darling_lamperti") d = pmeans::darling_lamperti_pdf(mo.alpha, p, v);
        rows.push_back({v, d});
      }
      write_table(cfg, "density " + density_kind, {"x", "density"}, rows);
      return 0;
    }
    if (*transform) {
      std::vector<std::vector<double>> rows;
      std::vector<std::string> header{"lambda", "value"};
      std::string comment;
      const pmeans::AtomicDistribution x = xo.get();
      for (double lam : pmeans::parse_real_list(lambdas)) {
        if (transform_kind == "cs") {
          comment = "E(1 + lambda X~)^{-theta} = (sum p_i (1 + lambda x_i)^alpha)^{-theta/alpha}";
          rows.push_back({lam, pmeans::cs_transform_rhs(pmeans::AlphaTheta(mo.alpha, mo.theta), x, lam)});
        } else if (transform_kind == "dirichlet_log") {
          comment = "E(1 + lambda X~)^{-theta} = exp(-theta sum p_i log(1 + lambda x_i))";
          rows.push_back({lam, pmeans::dirichlet_log_transform(mo.theta, x, lam)});
        } else if (transform_kind == "alpha0") {
          comment = "E log(1 + lambda X~) and E(1 + lambda X~)^{-1} for the (alpha, 0) model";
          header = {"lambda", "log_form", "stieltjes_form"};
          const auto t = pmeans::alpha0_transform(mo.alpha, x, lam);
          rows.push_back({lam, t.log_form, t.stieltjes_form});
        } else {
          comment = "Lamperti Stieltjes transform (q + p(1+lambda)^{alpha-1}) / (q + p(1+lambda)^alpha)";
          if (!xo.bernoulli) throw CLI::ValidationError("--bernoulli", "lamperti needs --bernoulli p");
          rows.push_back({lam, pmeans::lamperti_stieltjes(mo.alpha, *xo.bernoulli, lam)});
        }
      }
      write_table(cfg, comment, header, rows);
      return 0;
    }
    if (*figure) {
      std::vector<std::vector<double>> rows;
      if (figure_name == "ratio_densities") {
        for (const auto& r : pmeans::ratio_density_table(points)) {
          rows.push_back({r.alpha, r.x, r.ratio_power_pdf, r.ratio_pdf});
        }
        write_table(cfg,
                    "densities of R_alpha^alpha (positive shifted Cauchy) and R_alpha = T/T', alpha = k/8",
                    {"alpha", "x", "ratio_power_pdf", "ratio_pdf"}, rows);
      } else {
        for (const auto& r : pmeans::discriminant_table(points)) {
          rows.push_back({r.alpha, r.half_discriminant, r.r_minus, r.r_plus});
        }
        write_table(cfg,
                    "half discriminant cos^2(alpha pi) + alpha^2 - 1 and extrema r_-, r_+ of the R_alpha "
                    "density; alpha_c = " + format_real(pmeans::alpha_critical()) +
                        ", inflection = " + format_real(pmeans::inflection_abscissa()),
                    {"alpha", "half_discriminant", "r_minus", "r_plus"}, rows);
      }
      return 0;
    }
    if (*verify) {
      return cmd_verify(cfg, verify->count("--samples") > 0, checks, all, grid, sentinel, param_args);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
