#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "avgq/learner.hpp"
#include "avgq/mdp.hpp"

namespace avgq {

inline constexpr uint64_t kDefaultBaseSeed = 987654321;

/// One learner variant inside an experiment, with optional per-variant
/// stepsize overrides.
struct VariantSpec {
  Variant kind = Variant::kAdaptiveSet;
  StepSchedule schedule = StepSchedule::kAdaptive;  // kDiscounted only
  double gamma = 0.99;                              // kDiscounted only
  std::string shift = "none";                       // kGeneric only: "none" | "center"
  std::optional<double> alpha;
  std::optional<double> h;
  std::string label_override;

  std::string label() const;
  bool discounted() const { return kind == Variant::kDiscounted; }
};

struct ExperimentConfig {
  std::string mdp_source = "appendix-c";  // bundled name or JSON file path
  // "": default (appendix-c behavior when the MDP is the bundled one, else
  // uniform); "appendix-c"; "uniform"; or a JSON file path. An inline policy
  // takes precedence.
  std::string policy_source;
  std::optional<BehaviorPolicy> policy_inline;

  std::vector<VariantSpec> variants;

  double alpha = 2.0;
  double h = 2.0;
  long horizon = 100000;
  int replications = 100;
  uint64_t base_seed = kDefaultBaseSeed;
  int initial_state = 0;
  bool bound_check = true;  // enforced on undiscounted adaptive-clock variants
  double gamma = 0.99;      // discounted reference target

  // Reference tables to solve for, in addition to the ones the variant list
  // already requires: any of "q_star", "q_bar_star", "q_gamma_star".
  std::vector<std::string> targets;

  std::string output_csv;
  std::string output_json;
  std::string header_note;

  void validate() const;
};

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
  bool operator==(const MeanStderr&) const = default;
};

struct VariantSeries {
  std::string label;
  std::vector<std::string> metric_names;               // emission order
  std::vector<std::vector<MeanStderr>> metric_values;  // [metric][checkpoint]

  const std::vector<MeanStderr>& metric(const std::string& name) const;
  bool operator==(const VariantSeries&) const = default;
};

/// Aggregated curves: per variant, mean and standard error of every logged
/// metric across replications, on a shared checkpoint grid.
struct MetricSeries {
  std::string header;  // config echo emitted at the top of every output
  std::vector<long> checkpoints;
  std::vector<VariantSeries> variants;

  const VariantSeries& variant(const std::string& label) const;
  bool operator==(const MetricSeries&) const = default;
};

/// Geometric logging grid {ceil(1.25^j)} capped at and including `horizon`,
/// deduplicated.
std::vector<long> checkpoint_grid(long horizon);

/// The two-state, two-action benchmark model and its behavior policy.
std::pair<TabularMdp, BehaviorPolicy> build_appendix_c();

/// Resolves a bundled name ("appendix-c") or a JSON file path.
TabularMdp resolve_mdp(const std::string& source);
BehaviorPolicy resolve_policy(const ExperimentConfig& config, const TabularMdp& mdp);

/// Runs `replications` seeded learners per variant and aggregates the logged
/// metrics. Deterministic given the config; independent of `workers`.
/// Writes CSV/JSON outputs when the config names paths.
MetricSeries run_experiment(const ExperimentConfig& config, int workers = 0);

/// Mean (and standard error) across replications of the running average
/// reward (1/k) * sum_{i<=k} R(S_i, A_i) at each checkpoint.
std::vector<MeanStderr> policy_rollout(const TabularMdp& mdp, const BehaviorPolicy& policy,
                                       long horizon, int replications, uint64_t base_seed,
                                       const std::vector<long>& grid, int workers = 0,
                                       int initial_state = 0);

/// Least-squares slope of log(mean) vs log(k) over the final `window`
/// fraction of checkpoints (at least 10 required). Throws ConvergenceError
/// when a selected mean is nonpositive (non-convergence signal).
double fit_rate(const MetricSeries& series, const std::string& variant_label,
                const std::string& metric, double window);

void emit_csv(const MetricSeries& series, const std::string& path);
void emit_json(const MetricSeries& series, const std::string& path);
MetricSeries load_metric_series_json(const std::string& path);

struct AppendixCOptions {
  int figure = 1;  // 1..4
  std::string out_dir = "out";
  int workers = 0;
  bool write_outputs = true;
  std::optional<int> replications;
  std::optional<long> horizon;
  std::optional<uint64_t> base_seed;
};

/// Canned experiment behind `appendix-c --figure N` for figures 1, 2 and 4.
ExperimentConfig appendix_c_figure_config(int figure);

/// Runs one of the four canned reproductions and returns its series.
/// Figure 3 runs the learn-then-rollout pipeline (metrics
/// running_avg_reward and pi_star_recovery_rate for variant
/// greedy_adaptive, running_avg_reward for greedy_qbar).
MetricSeries run_appendix_c_figure(const AppendixCOptions& options);

/// Canned rate experiment behind `rate` (alpha = h = 6, horizon 1e6,
/// 200 replications).
ExperimentConfig rate_experiment_config();

/// Log-log window covering the final decade of a horizon's checkpoint grid.
double last_decade_window(long horizon);

}  // namespace avgq
