#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rgg/analytics.hpp"
#include "rgg/experiments.hpp"
#include "rgg/geometry.hpp"
#include "rgg/graph.hpp"

namespace {

using nlohmann::json;

struct RunConfig {
  std::string config_path;
  int d = 2;
  double delta = 0.1;
  std::vector<double> deltas;
  std::optional<double> lambda;
  std::optional<double> theta;
  bool solve_lambda = false;
  std::uint64_t seed = 0;
  std::uint64_t replicates = 10000;
  std::string output;  // JSONL sink
  std::string csv;     // CSV sink (sweep)
  std::string gamma_mode = "paper-dominating";
  std::string variance_mode = "quadrature";
  double quad_tol = 1e-8;
  std::uint64_t mc_budget = 100000;
  double point_budget = 1e7;
  int workers = 1;
  bool log_domain = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flags override config-file values: after parsing, fill every option the
// user did not pass from the flat JSON document.
void apply_config(CLI::App& app, RunConfig& cfg) {
  if (cfg.config_path.empty()) return;
  std::ifstream in(cfg.config_path);
  if (!in) throw UsageError("cannot open config file " + cfg.config_path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError(std::string("config parse failure: ") + e.what());
  }
  const auto unset = [&](const char* flag) {
    const CLI::Option* opt = app.get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  if (j.contains("d") && unset("--dim")) cfg.d = j["d"].get<int>();
  if (j.contains("delta") && unset("--delta")) cfg.delta = j["delta"];
  if (j.contains("deltas") && unset("--deltas")) {
    cfg.deltas = j["deltas"].get<std::vector<double>>();
  }
  if (j.contains("lambda") && unset("--lambda")) {
    cfg.lambda = j["lambda"].get<double>();
  }
  if (j.contains("theta") && unset("--theta")) {
    cfg.theta = j["theta"].get<double>();
  }
  if (j.contains("solve_lambda") && unset("--solve-lambda")) {
    cfg.solve_lambda = j["solve_lambda"];
  }
  if (j.contains("seed") && unset("--seed")) cfg.seed = j["seed"];
  if (j.contains("replicates") && unset("--replicates")) {
    cfg.replicates = j["replicates"];
  }
  if (j.contains("output") && unset("--output")) cfg.output = j["output"];
  if (j.contains("csv") && unset("--csv")) cfg.csv = j["csv"];
  if (j.contains("gamma_mode") && unset("--gamma-mode")) {
    cfg.gamma_mode = j["gamma_mode"];
  }
  if (j.contains("variance_mode") && unset("--variance-mode")) {
    cfg.variance_mode = j["variance_mode"];
  }
  if (j.contains("quad_tol") && unset("--quad-tol")) cfg.quad_tol = j["quad_tol"];
  if (j.contains("mc_budget") && unset("--mc-budget")) {
    cfg.mc_budget = j["mc_budget"];
  }
  if (j.contains("point_budget") && unset("--point-budget")) {
    cfg.point_budget = j["point_budget"];
  }
  if (j.contains("workers") && unset("--workers")) cfg.workers = j["workers"];
  if (j.contains("log_domain") && unset("--log-domain")) {
    cfg.log_domain = j["log_domain"];
  }
}

rgg::BoundOptions bound_options(const RunConfig& cfg) {
  rgg::BoundOptions opts;
  if (cfg.gamma_mode == "paper-dominating") {
    opts.gamma1_mode = rgg::GammaMode::paperDominating;
  } else if (cfg.gamma_mode == "monte-carlo") {
    opts.gamma1_mode = rgg::GammaMode::monteCarlo;
  } else {
    throw UsageError("unknown --gamma-mode '" + cfg.gamma_mode +
                     "' (paper-dominating | monte-carlo)");
  }
  if (cfg.variance_mode == "quadrature") {
    opts.variance_mode = rgg::VarianceMode::quadrature;
  } else if (cfg.variance_mode == "bracket-worst") {
    opts.variance_mode = rgg::VarianceMode::bracketWorst;
  } else {
    throw UsageError("unknown --variance-mode '" + cfg.variance_mode +
                     "' (quadrature | bracket-worst)");
  }
  opts.quad_rel_tol = cfg.quad_tol;
  opts.mc_budget = cfg.mc_budget;
  opts.mc_stream = rgg::RandomStream{cfg.seed, 0x67616d6d61ULL};
  if (cfg.log_domain) opts.linear_cutoff = 0;
  return opts;
}

rgg::ModelParams resolve_params(const RunConfig& cfg) {
  if (cfg.solve_lambda) {
    if (!cfg.theta) throw UsageError("--solve-lambda requires --theta");
    return rgg::calibrated_params(cfg.d, cfg.delta, *cfg.theta);
  }
  if (!cfg.lambda) throw UsageError("either --lambda or --solve-lambda needed");
  rgg::ModelParams p;
  p.d = cfg.d;
  p.delta = cfg.delta;
  p.lambda = *cfg.lambda;
  p.theta = cfg.theta;
  return p;
}

double resolve_theta(const RunConfig& cfg, const rgg::ModelParams& params) {
  if (cfg.theta) return *cfg.theta;
  const double m = rgg::mean_edges(params);
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw UsageError("--theta required (mean is zero or not representable)");
  }
  return m;
}

int cmd_bounds(const RunConfig& cfg) {
  const auto params = resolve_params(cfg);
  const double theta = resolve_theta(cfg, params);
  const auto report = rgg::tv_bound(params, theta, bound_options(cfg));
  std::cout << report.to_json() << '\n';
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto params = resolve_params(cfg);
  const double theta = resolve_theta(cfg, params);
  rgg::SweepOptions opts;
  opts.replication.workers = cfg.workers;
  opts.replication.point_budget = cfg.point_budget;
  opts.bound = bound_options(cfg);
  std::ofstream sink;
  if (!cfg.output.empty()) {
    sink.open(cfg.output, std::ios::app);
    if (!sink) throw UsageError("cannot open output file " + cfg.output);
    opts.jsonl_sink = &sink;
  }
  const auto rec =
      rgg::run_experiment(params, theta, cfg.replicates, cfg.seed, opts);
  std::cout << rec.to_json() << '\n';
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  if (cfg.deltas.empty()) throw UsageError("--deltas required for sweep");
  if (!cfg.theta) throw UsageError("--theta required for sweep");
  rgg::SweepOptions opts;
  opts.replication.workers = cfg.workers;
  opts.replication.point_budget = cfg.point_budget;
  opts.bound = bound_options(cfg);
  std::ofstream sink;
  if (!cfg.output.empty()) {
    sink.open(cfg.output, std::ios::app);
    if (!sink) throw UsageError("cannot open output file " + cfg.output);
    opts.jsonl_sink = &sink;
  }
  const auto records = rgg::convergence_sweep(
      cfg.deltas, cfg.d, *cfg.theta, cfg.replicates, cfg.seed, opts);
  std::size_t completed = 0;
  for (const auto& r : records) {
    if (r.skipped) {
      std::cerr << "skipped delta=" << r.params.delta << ": " << r.skip_reason
                << '\n';
    } else {
      ++completed;
    }
  }
  if (!cfg.csv.empty()) {
    std::ofstream csv(cfg.csv);
    if (!csv) throw UsageError("cannot open csv file " + cfg.csv);
    rgg::write_csv(records, csv);
  } else {
    rgg::write_csv(records, std::cout);
  }
  return completed > 0 ? 0 : 3;
}

int cmd_verify(const RunConfig& cfg) {
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << '\n';
    if (!ok) ++failures;
  };

  // moment identities on the closed-form grid
  for (double a : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const auto mc = rgg::moment_check(a, cfg.replicates,
                                      rgg::RandomStream{cfg.seed, 1});
    report("moment_check a=" + std::to_string(a), mc.pass);
  }

  // A-bracket on 1000 random (x, params)
  {
    rgg::Rng rng(rgg::RandomStream{cfg.seed, 2});
    bool ok = true;
    for (int i = 0; i < 1000 && ok; ++i) {
      rgg::ModelParams p;
      p.d = 1 + static_cast<int>(rng.uniform() * 8.0);
      p.delta = 0.02 + rng.uniform() * 0.6;
      p.lambda = 0.1 + rng.uniform() * 20.0;
      const double r = rng.uniform() * (1.5 + p.delta);
      const double a = rgg::local_mean_A(r, p);
      const double a_in = rgg::a_interior_log(p).to_double();
      const double lower = r <= 1.0 - 0.5 * p.delta ? a_in : 0.0;
      const double upper = r <= 1.0 + 0.5 * p.delta ? a_in : 0.0;
      ok = a >= lower * (1.0 - 1e-9) && a <= upper * (1.0 + 1e-9);
    }
    report("A_bracket_1000_random", ok);
  }

  // quadrature variance inside the closed-form bracket
  {
    rgg::Rng rng(rgg::RandomStream{cfg.seed, 3});
    bool ok = true;
    for (int i = 0; i < 20 && ok; ++i) {
      rgg::ModelParams p;
      p.d = 1 + static_cast<int>(rng.uniform() * 6.0);
      p.delta = 0.05 + rng.uniform() * 0.4;
      p.lambda = 0.2 + rng.uniform() * 10.0;
      const auto [lo, hi] = rgg::variance_bracket(p);
      const double v = rgg::variance_quadrature_log(p).to_double();
      ok = v >= lo * (1.0 - 1e-6) && v <= hi * (1.0 + 1e-6);
    }
    report("variance_quadrature_in_bracket", ok);
  }

  return failures == 0 ? 0 : 1;
}

int cmd_solve_lambda(const RunConfig& cfg) {
  if (!cfg.theta) throw UsageError("--theta required for solve-lambda");
  const auto sol = rgg::solve_lambda(cfg.d, cfg.delta, *cfg.theta);
  json j;
  j["lambda"] = std::isfinite(sol.lambda) ? json(sol.lambda) : json(nullptr);
  j["log_lambda"] = sol.log_lambda;
  std::cout << j.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  if (const char* env_seed = std::getenv("RGG_SEED")) {
    cfg.seed = std::strtoull(env_seed, nullptr, 10);
  }

  CLI::App app{
      "Edge counts of random geometric graphs over Poisson point processes: "
      "Poisson/normal approximation bounds, simulation and verification"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--config", cfg.config_path,
                 "flat JSON config file; explicit flags take precedence");
  app.add_option("-d,--dim", cfg.d, "space dimension d (unitless, >= 1)");
  app.add_option("--delta", cfg.delta, "distance parameter delta (length)");
  app.add_option("--deltas", cfg.deltas,
                 "sweep list of delta values (lengths)")
      ->delimiter(',');
  app.add_option("--lambda", cfg.lambda,
                 "intensity lambda (points per unit volume)");
  app.add_option("--theta", cfg.theta,
                 "target Poisson parameter theta (unitless)");
  app.add_flag("--solve-lambda", cfg.solve_lambda,
               "derive lambda so the expected edge count equals theta");
  app.add_option("--seed", cfg.seed,
                 "base RNG seed (unitless; env RGG_SEED as default)");
  app.add_option("--replicates", cfg.replicates,
                 "Monte Carlo replicates (count)");
  app.add_option("-o,--output", cfg.output, "JSONL sink path (appended)");
  app.add_option("--csv", cfg.csv, "CSV output path (sweep)");
  app.add_option("--gamma-mode", cfg.gamma_mode,
                 "gamma1 mode: paper-dominating | monte-carlo");
  app.add_option("--variance-mode", cfg.variance_mode,
                 "variance term: quadrature | bracket-worst");
  app.add_option("--quad-tol", cfg.quad_tol,
                 "relative quadrature tolerance (unitless)");
  app.add_option("--mc-budget", cfg.mc_budget,
                 "Monte Carlo sample budget (count)");
  app.add_option("--point-budget", cfg.point_budget,
                 "max expected points per replicate (count)");
  app.add_option("--workers", cfg.workers,
                 "worker threads (count; output independent of N)");
  app.add_flag("--log-domain", cfg.log_domain,
               "suppress linear materialization entirely");

  auto* bounds = app.add_subcommand("bounds", "print the assembled BoundReport");
  auto* simulate =
      app.add_subcommand("simulate", "replicate the edge count and compare");
  auto* sweep = app.add_subcommand("sweep", "delta sweep at fixed d and theta");
  auto* verify =
      app.add_subcommand("verify", "closed-form and bracket verification suite");
  auto* solve =
      app.add_subcommand("solve-lambda", "lambda with mean edge count theta");

  try {
    app.parse(argc, argv);
    apply_config(app, cfg);
    if (bounds->parsed()) return cmd_bounds(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (solve->parsed()) return cmd_solve_lambda(cfg);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const rgg::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
