// avgq — average-reward Q-learning laboratory.
//
// Subcommands:
//   solve <mdp>          exact fixed points, gain, contraction factors
//   learn <config>       run a learning experiment from a JSON config
//   appendix-c           canned benchmark reproductions (--figure 1..4)
//   check-props          randomized operator-law suites
//   rate [<config>]      experiment + log-log rate fit
//
// Exit codes: 0 success, 2 usage/config error, 3 model validation error,
// 4 convergence or assertion failure.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "avgq/chain.hpp"
#include "avgq/errors.hpp"
#include "avgq/experiment.hpp"
#include "avgq/io.hpp"
#include "avgq/operators.hpp"
#include "avgq/props.hpp"
#include "avgq/solve.hpp"

namespace {

int run_solve(const std::string& mdp_source, const std::string& policy_source, double tol,
              long max_iter, const std::string& out_path) {
  const avgq::TabularMdp mdp = avgq::resolve_mdp(mdp_source);

  avgq::ExperimentConfig policy_cfg;
  policy_cfg.mdp_source = mdp_source;
  policy_cfg.policy_source = policy_source;
  const avgq::BehaviorPolicy policy = avgq::resolve_policy(policy_cfg, mdp);
  avgq::check_ergodic(mdp, policy);

  const double beta = avgq::tv_contraction_factor(mdp);
  if (beta >= 1.0) {
    throw avgq::ModelError("solve: span contraction not certified (beta=" + std::to_string(beta) +
                           ")");
  }
  const avgq::FrequencyMatrix d = avgq::stationary_frequency(mdp, policy);
  const double d_min = d.min_entry();
  const double beta_bar = 1.0 - (1.0 - beta) * d_min;

  const avgq::SolveReport report = avgq::solve_bellman(mdp, tol, max_iter);
  const std::string json = avgq::solve_report_to_json(report, beta, beta_bar, d_min);
  if (out_path.empty()) {
    std::cout << json << "\n";
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("solve: cannot open '" + out_path + "'");
    f << json << "\n";
  }
  return 0;
}

int run_learn(const std::string& config_path, int workers) {
  const avgq::ExperimentConfig config = avgq::load_experiment_config(config_path);
  const avgq::MetricSeries series = avgq::run_experiment(config, workers);
  std::cout << "# " << series.header << "\n";
  std::cout << "variants=" << series.variants.size()
            << " checkpoints=" << series.checkpoints.size() << "\n";
  if (config.output_csv.empty() && config.output_json.empty()) {
    std::cout << "note: no output_csv/output_json in config; nothing written\n";
  }
  return 0;
}

int run_appendix_c(int figure, const std::string& out_dir, int workers,
                   std::optional<int> replications, std::optional<long> horizon,
                   std::optional<uint64_t> base_seed) {
  avgq::AppendixCOptions options;
  options.figure = figure;
  options.out_dir = out_dir;
  options.workers = workers;
  options.replications = replications;
  options.horizon = horizon;
  options.base_seed = base_seed;
  const avgq::MetricSeries series = avgq::run_appendix_c_figure(options);
  std::cout << "# " << series.header << "\n";
  std::cout << "wrote " << out_dir << "/figure" << figure << ".csv and .json\n";
  return 0;
}

int run_check_props(long trials, uint64_t seed) {
  const auto results = avgq::run_property_suites(trials, seed);
  for (const auto& r : results) {
    std::printf("%-40s trials=%-6ld %s", r.name.c_str(), r.trials,
                r.passed() ? "PASS" : "FAIL");
    if (!r.passed()) std::printf("  failures=%ld  first: %s", r.failures, r.detail.c_str());
    std::printf("\n");
  }
  if (!avgq::all_passed(results)) {
    throw avgq::ConvergenceError("check-props: property suite failed", 0.0, 0);
  }
  return 0;
}

int run_rate(const std::string& config_path, int workers, const std::string& out_path) {
  avgq::ExperimentConfig config;
  if (config_path.empty() || config_path == "appendix-c") {
    config = avgq::rate_experiment_config();
  } else {
    config = avgq::load_experiment_config(config_path);
  }
  if (!out_path.empty()) config.output_csv = out_path;
  const avgq::MetricSeries series = avgq::run_experiment(config, workers);
  const double window = avgq::last_decade_window(config.horizon);
  const double slope = avgq::fit_rate(series, config.variants.front().label(),
                                      "span_err_sq_to_Qstar", window);
  std::cout << "# " << series.header << "\n";
  std::cout << "log-log slope over final decade: " << slope << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"avgq: tabular average-reward Q-learning laboratory"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "worker threads (0 = hardware concurrency)");

  auto* solve = app.add_subcommand("solve", "solve exact fixed points for an MDP");
  std::string solve_mdp;
  std::string solve_policy;
  double solve_tol = 1e-12;
  long solve_max_iter = 1'000'000;
  std::string solve_out;
  solve->add_option("mdp", solve_mdp, "bundled name ('appendix-c') or MDP JSON path")->required();
  solve->add_option("--policy", solve_policy,
                    "'appendix-c', 'uniform', or a policy JSON path (default: appendix-c "
                    "behavior for the bundled model, uniform otherwise)");
  solve->add_option("--tol", solve_tol, "fixed-point tolerance");
  solve->add_option("--max-iter", solve_max_iter, "iteration cap");
  solve->add_option("--out", solve_out, "write the JSON report here instead of stdout");

  auto* learn = app.add_subcommand("learn", "run a learning experiment from a JSON config");
  std::string learn_config;
  learn->add_option("config", learn_config, "experiment config JSON path")->required();

  auto* appendix = app.add_subcommand("appendix-c", "canned benchmark reproductions");
  int figure = 1;
  std::string out_dir = "out";
  std::optional<int> reps_override;
  std::optional<long> horizon_override;
  std::optional<uint64_t> seed_override;
  appendix->add_option("--figure", figure, "which reproduction to run (1..4)")
      ->check(CLI::Range(1, 4));
  appendix->add_option("--out-dir", out_dir, "output directory");
  appendix->add_option("--replications", reps_override, "override replication count");
  appendix->add_option("--horizon", horizon_override, "override horizon");
  appendix->add_option("--base-seed", seed_override, "override base seed");

  auto* props = app.add_subcommand("check-props", "randomized operator-law suites");
  long trials = 10000;
  uint64_t props_seed = 20240901;
  props->add_option("--trials", trials, "trials per suite");
  props->add_option("--seed", props_seed, "suite RNG seed");

  auto* rate = app.add_subcommand("rate", "experiment + log-log convergence-rate fit");
  std::string rate_config;
  std::string rate_out;
  rate->add_option("config", rate_config,
                   "experiment config JSON path (default: canned rate experiment)");
  rate->add_option("--out", rate_out, "also write the series CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) {
      return run_solve(solve_mdp, solve_policy, solve_tol, solve_max_iter, solve_out);
    }
    if (learn->parsed()) return run_learn(learn_config, workers);
    if (appendix->parsed()) {
      return run_appendix_c(figure, out_dir, workers, reps_override, horizon_override,
                            seed_override);
    }
    if (props->parsed()) return run_check_props(trials, props_seed);
    if (rate->parsed()) return run_rate(rate_config, workers, rate_out);
  } catch (const avgq::ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 3;
  } catch (const avgq::BoundViolationError& e) {
    std::cerr << "assertion failure: " << e.what() << "\n";
    return 4;
  } catch (const avgq::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
