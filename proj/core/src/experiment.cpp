#include "avgq/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "avgq/chain.hpp"
#include "avgq/errors.hpp"
#include "avgq/io.hpp"
#include "avgq/operators.hpp"
#include "avgq/solve.hpp"
#include "avgq/span.hpp"

namespace avgq {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Runs fn(0..n-1) on a pool; any exception is rethrown for the lowest index.
void parallel_for_index(long n, int workers, const std::function<void(long)>& fn) {
  if (n <= 0) return;
  long pool = workers > 0 ? workers : static_cast<long>(std::thread::hardware_concurrency());
  pool = std::clamp<long>(pool, 1, n);
  if (pool == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(pool));
  for (long t = 0; t < pool; ++t) {
    threads.emplace_back([&] {
      for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct ReferenceSet {
  std::vector<double> span_ref;  // span errors measured against this table
  std::vector<double> bar_ref;   // asynchronous fixed point (or the same table)
  std::vector<double> sup_ref;   // sup errors measured against this table
};

const std::vector<std::string> kRunMetricNames = {
    "span_err_sq_to_Qstar", "span_err_sq_to_Qbar", "sup_err_to_Qtilde", "sup_err_sq_to_Qtilde",
    "span_Qk",              "b_k",                 "stepsize"};

// One replication's checkpoint rows, kRunMetricNames order.
using RunLog = std::vector<std::array<double, 7>>;

LearnerConfig learner_config_for(const VariantSpec& spec, const ExperimentConfig& config) {
  LearnerConfig lc;
  lc.variant = spec.kind;
  lc.alpha = spec.alpha.value_or(config.alpha);
  lc.h = spec.h.value_or(config.h);
  lc.gamma = spec.gamma;
  lc.schedule = spec.schedule;
  lc.initial_state = config.initial_state;
  if (spec.kind == Variant::kGeneric && spec.shift == "center") {
    lc.kernel_shift = [](const QTable& q) { return -center_offset(q.values); };
  }
  const bool adaptive_undiscounted =
      spec.kind == Variant::kAdaptiveSet || spec.kind == Variant::kAdaptiveCentered ||
      spec.kind == Variant::kGeneric;
  lc.bound_check = config.bound_check && adaptive_undiscounted;
  return lc;
}

RunLog run_one_replication(const TabularMdp& mdp, const BehaviorPolicy& policy,
                           const LearnerConfig& lc, const ReferenceSet& refs, uint64_t seed,
                           const std::vector<long>& grid) {
  Learner learner(mdp, policy, lc, RngStream(seed));
  RunLog log;
  log.reserve(grid.size());
  size_t gi = 0;
  const long horizon = grid.empty() ? 0 : grid.back();
  for (long k = 1; k <= horizon; ++k) {
    const StepInfo info = learner.step();
    if (gi < grid.size() && k == grid[gi]) {
      const auto& q = learner.q().values;
      const double span_star = span_dist(q, refs.span_ref);
      const double span_bar = span_dist(q, refs.bar_ref);
      const double sup_tilde = sup_dist(q, refs.sup_ref);
      log.push_back({span_star * span_star, span_bar * span_bar, sup_tilde, sup_tilde * sup_tilde,
                     span(q), learner.current_growth_bound(), info.stepsize});
      ++gi;
    }
  }
  return log;
}

// Mean and standard error in replication-index order.
MeanStderr mean_stderr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

VariantSeries aggregate_runs(const std::string& label, const std::vector<RunLog>& runs,
                             size_t n_checkpoints) {
  VariantSeries vs;
  vs.label = label;
  vs.metric_names = kRunMetricNames;
  vs.metric_values.assign(kRunMetricNames.size(), {});
  std::vector<double> column(runs.size());
  for (size_t m = 0; m < kRunMetricNames.size(); ++m) {
    vs.metric_values[m].reserve(n_checkpoints);
    for (size_t c = 0; c < n_checkpoints; ++c) {
      for (size_t r = 0; r < runs.size(); ++r) column[r] = runs[r][c][m];
      vs.metric_values[m].push_back(mean_stderr(column));
    }
  }
  return vs;
}

std::string config_header(const ExperimentConfig& config) {
  std::ostringstream os;
  os << "avgq experiment: mdp=" << config.mdp_source;
  os << " policy=" << (config.policy_inline ? "inline"
                       : config.policy_source.empty()
                           ? (config.mdp_source == "appendix-c" ? "appendix-c" : "uniform")
                           : config.policy_source);
  os << " alpha=" << format_double(config.alpha) << " h=" << format_double(config.h);
  os << " horizon=" << config.horizon << " replications=" << config.replications;
  os << " base_seed=" << config.base_seed << " initial_state=" << config.initial_state;
  os << " bound_check=" << (config.bound_check ? "on" : "off");
  os << " variants=";
  for (size_t i = 0; i < config.variants.size(); ++i) {
    const auto& spec = config.variants[i];
    if (i) os << ",";
    os << spec.label();
    if (spec.alpha || spec.h || spec.discounted()) {
      os << "(alpha=" << format_double(spec.alpha.value_or(config.alpha))
         << ",h=" << format_double(spec.h.value_or(config.h));
      if (spec.discounted()) os << ",gamma=" << format_double(spec.gamma);
      os << ")";
    }
  }
  if (!config.targets.empty()) {
    os << " targets=";
    for (size_t i = 0; i < config.targets.size(); ++i) {
      if (i) os << ",";
      os << config.targets[i];
    }
  }
  if (!config.header_note.empty()) os << " " << config.header_note;
  return os.str();
}

void write_outputs(const MetricSeries& series, const ExperimentConfig& config) {
  if (!config.output_csv.empty()) emit_csv(series, config.output_csv);
  if (!config.output_json.empty()) emit_json(series, config.output_json);
}

bool is_appendix_c_name(const std::string& source) {
  return source == "appendix-c" || source == "appendix_c";
}

}  // namespace

std::string VariantSpec::label() const {
  if (!label_override.empty()) return label_override;
  switch (kind) {
    case Variant::kAdaptiveSet:
      return "adaptive_set";
    case Variant::kAdaptiveCentered:
      return "adaptive_centered";
    case Variant::kGeneric:
      return shift == "center" ? "generic_center" : "generic_none";
    case Variant::kUniversal:
      return "universal";
    case Variant::kDiscounted:
      return schedule == StepSchedule::kAdaptive ? "discounted_adaptive" : "discounted_universal";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (variants.empty()) throw std::invalid_argument("ExperimentConfig: variants list is empty");
  if (replications < 1) throw std::invalid_argument("ExperimentConfig: replications must be >= 1");
  if (horizon < 1) throw std::invalid_argument("ExperimentConfig: horizon must be >= 1");
  for (const auto& spec : variants) {
    if (spec.kind == Variant::kGeneric && spec.shift != "none" && spec.shift != "center") {
      throw std::invalid_argument("ExperimentConfig: unknown kernel shift '" + spec.shift + "'");
    }
  }
  for (const auto& target : targets) {
    if (target != "q_star" && target != "q_bar_star" && target != "q_gamma_star") {
      throw std::invalid_argument("ExperimentConfig: unknown target '" + target + "'");
    }
  }
}

const std::vector<MeanStderr>& VariantSeries::metric(const std::string& name) const {
  for (size_t i = 0; i < metric_names.size(); ++i) {
    if (metric_names[i] == name) return metric_values[i];
  }
  throw std::invalid_argument("VariantSeries: no metric named '" + name + "'");
}

const VariantSeries& MetricSeries::variant(const std::string& label) const {
  for (const auto& vs : variants) {
    if (vs.label == label) return vs;
  }
  throw std::invalid_argument("MetricSeries: no variant labelled '" + label + "'");
}

std::vector<long> checkpoint_grid(long horizon) {
  if (horizon < 1) throw std::invalid_argument("checkpoint_grid: horizon must be >= 1");
  std::vector<long> grid;
  for (int j = 0;; ++j) {
    const double v = std::ceil(std::pow(1.25, j));
    if (v > static_cast<double>(horizon)) break;
    const long k = static_cast<long>(v);
    if (grid.empty() || grid.back() != k) grid.push_back(k);
  }
  if (grid.empty() || grid.back() != horizon) grid.push_back(horizon);
  return grid;
}

std::pair<TabularMdp, BehaviorPolicy> build_appendix_c() {
  // transition[s][a][s']
  const std::vector<double> transition = {
      0.2, 0.8,  // s1, a1
      0.8, 0.2,  // s1, a2
      0.5, 0.5,  // s2, a1
      0.5, 0.5,  // s2, a2
  };
  const std::vector<double> reward = {1.0, 1.0, 2.0, 3.0};
  TabularMdp mdp = TabularMdp::make(2, 2, transition, reward, "appendix-c");
  BehaviorPolicy policy = BehaviorPolicy::make(2, 2, {0.2, 0.8, 0.8, 0.2});
  return {std::move(mdp), std::move(policy)};
}

TabularMdp resolve_mdp(const std::string& source) {
  if (is_appendix_c_name(source)) return build_appendix_c().first;
  return load_mdp_json(source);
}

BehaviorPolicy resolve_policy(const ExperimentConfig& config, const TabularMdp& mdp) {
  if (config.policy_inline) {
    auto policy = *config.policy_inline;
    policy.validate(/*full_support=*/true);
    if (policy.n_states != mdp.n_states || policy.n_actions != mdp.n_actions) {
      throw std::invalid_argument("policy shape does not match the MDP");
    }
    return policy;
  }
  const std::string& src = config.policy_source;
  if (is_appendix_c_name(src) || (src.empty() && is_appendix_c_name(config.mdp_source))) {
    auto policy = build_appendix_c().second;
    if (policy.n_states != mdp.n_states || policy.n_actions != mdp.n_actions) {
      throw std::invalid_argument("appendix-c policy requires a 2-state, 2-action MDP");
    }
    return policy;
  }
  if (src.empty() || src == "uniform") {
    return BehaviorPolicy::uniform(mdp.n_states, mdp.n_actions);
  }
  return load_policy_json(src);
}

MetricSeries run_experiment(const ExperimentConfig& config, int workers) {
  config.validate();
  const TabularMdp mdp = resolve_mdp(config.mdp_source);
  const BehaviorPolicy policy = resolve_policy(config, mdp);
  check_ergodic(mdp, policy);

  const auto requested = [&config](const char* name) {
    return std::find(config.targets.begin(), config.targets.end(), name) != config.targets.end();
  };
  const bool any_undiscounted =
      std::any_of(config.variants.begin(), config.variants.end(),
                  [](const VariantSpec& v) { return !v.discounted(); }) ||
      requested("q_star") || requested("q_bar_star");
  const bool any_discounted =
      std::any_of(config.variants.begin(), config.variants.end(),
                  [](const VariantSpec& v) { return v.discounted(); }) ||
      requested("q_gamma_star");

  ReferenceSet undiscounted_refs;
  if (any_undiscounted) {
    const double beta = tv_contraction_factor(mdp);
    if (beta >= 1.0) {
      throw ModelError("run_experiment: span contraction not certified (beta=" +
                       std::to_string(beta) + "); exact targets unavailable");
    }
    const FrequencyMatrix d = stationary_frequency(mdp, policy);
    const SolveReport star = solve_bellman(mdp);
    const SolveReport bar = solve_async_bellman(mdp, d);
    undiscounted_refs.span_ref = star.fixed_point.values;
    undiscounted_refs.bar_ref = bar.fixed_point.values;
    undiscounted_refs.sup_ref = star.fixed_point.values;  // centered representative
  }

  std::map<double, std::vector<double>> discounted_refs;
  if (any_discounted) {
    if (requested("q_gamma_star")) {
      discounted_refs[config.gamma] = discounted_value_iteration(mdp, config.gamma, 1e-10).values;
    }
    for (const auto& spec : config.variants) {
      if (spec.discounted() && !discounted_refs.count(spec.gamma)) {
        discounted_refs[spec.gamma] =
            discounted_value_iteration(mdp, spec.gamma, 1e-10).values;
      }
    }
  }

  const std::vector<long> grid = checkpoint_grid(config.horizon);

  MetricSeries series;
  series.header = config_header(config);
  series.checkpoints = grid;
  for (const auto& spec : config.variants) {
    const LearnerConfig lc = learner_config_for(spec, config);
    ReferenceSet refs;
    if (spec.discounted()) {
      const auto& qg = discounted_refs.at(spec.gamma);
      refs = ReferenceSet{qg, qg, qg};
    } else {
      refs = undiscounted_refs;
    }
    std::vector<RunLog> runs(static_cast<size_t>(config.replications));
    parallel_for_index(config.replications, workers, [&](long r) {
      runs[static_cast<size_t>(r)] = run_one_replication(
          mdp, policy, lc, refs, mix_seed(config.base_seed, static_cast<uint64_t>(r)), grid);
    });
    series.variants.push_back(aggregate_runs(spec.label(), runs, grid.size()));
  }

  write_outputs(series, config);
  return series;
}

std::vector<MeanStderr> policy_rollout(const TabularMdp& mdp, const BehaviorPolicy& policy,
                                       long horizon, int replications, uint64_t base_seed,
                                       const std::vector<long>& grid, int workers,
                                       int initial_state) {
  policy.validate(/*full_support=*/false);
  if (replications < 1) throw std::invalid_argument("policy_rollout: replications must be >= 1");
  if (grid.empty()) throw std::invalid_argument("policy_rollout: empty checkpoint grid");

  std::vector<std::vector<double>> runs(static_cast<size_t>(replications));
  parallel_for_index(replications, workers, [&](long r) {
    RngStream rng = RngStream::for_replication(base_seed, static_cast<uint64_t>(r));
    std::vector<double> averages;
    averages.reserve(grid.size());
    double total = 0.0;
    size_t gi = 0;
    int state = initial_state;
    for (long k = 1; k <= horizon && gi < grid.size(); ++k) {
      auto [a, s2, reward] = sample_step(mdp, policy, state, rng);
      total += reward;
      state = s2;
      if (k == grid[gi]) {
        averages.push_back(total / static_cast<double>(k));
        ++gi;
      }
    }
    runs[static_cast<size_t>(r)] = std::move(averages);
  });

  std::vector<MeanStderr> out;
  out.reserve(grid.size());
  std::vector<double> column(static_cast<size_t>(replications));
  for (size_t c = 0; c < grid.size(); ++c) {
    for (size_t r = 0; r < runs.size(); ++r) column[r] = runs[r][c];
    out.push_back(mean_stderr(column));
  }
  return out;
}

double fit_rate(const MetricSeries& series, const std::string& variant_label,
                const std::string& metric, double window) {
  if (!(window > 0.0) || window > 1.0) {
    throw std::invalid_argument("fit_rate: window must lie in (0,1]");
  }
  const auto& values = series.variant(variant_label).metric(metric);
  const size_t n = values.size();
  const size_t take = static_cast<size_t>(std::ceil(window * static_cast<double>(n)));
  if (take < 10) {
    throw std::invalid_argument("fit_rate: need at least 10 checkpoints in the window, have " +
                                std::to_string(take));
  }
  const size_t start = n - take;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = start; i < n; ++i) {
    if (!(values[i].mean > 0.0)) {
      throw ConvergenceError("fit_rate: nonpositive mean at k=" +
                                 std::to_string(series.checkpoints[i]) +
                                 "; series has not converged",
                             values[i].mean, static_cast<long>(i));
    }
    const double x = std::log(static_cast<double>(series.checkpoints[i]));
    const double y = std::log(values[i].mean);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(take);
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void emit_csv(const MetricSeries& series, const std::string& path) {
  if (series.variants.empty()) {
    throw std::invalid_argument("emit_csv: series has no variants");
  }
  std::ostringstream os;
  os << "# " << series.header << "\n";
  os << "variant,k,metric,mean,stderr\n";
  for (const auto& vs : series.variants) {
    for (size_t m = 0; m < vs.metric_names.size(); ++m) {
      for (size_t c = 0; c < series.checkpoints.size(); ++c) {
        os << vs.label << "," << series.checkpoints[c] << "," << vs.metric_names[m] << ","
           << format_double(vs.metric_values[m][c].mean) << ","
           << format_double(vs.metric_values[m][c].std_error) << "\n";
      }
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
  f << os.str();
  if (!f) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

namespace {
VariantSpec make_variant(Variant kind) {
  VariantSpec spec;
  spec.kind = kind;
  return spec;
}
}  // namespace

ExperimentConfig appendix_c_figure_config(int figure) {
  ExperimentConfig config;
  config.mdp_source = "appendix-c";
  config.alpha = 2.0;
  config.h = 2.0;
  config.horizon = 100000;
  config.replications = 100;
  switch (figure) {
    case 1: {
      // Adaptive converges to the exact target; universal plateaus away from
      // it. The universal variant needs its own clock rate: its contraction
      // factor is 1-(1-beta)*Dmin, far weaker than the adaptive one's.
      VariantSpec adaptive = make_variant(Variant::kAdaptiveSet);
      VariantSpec universal = make_variant(Variant::kUniversal);
      universal.alpha = 32.0;
      universal.h = 32.0;
      config.variants = {adaptive, universal};
      break;
    }
    case 2: {
      VariantSpec universal = make_variant(Variant::kUniversal);
      universal.alpha = 32.0;
      universal.h = 32.0;
      config.variants = {universal};
      break;
    }
    case 4: {
      VariantSpec universal = make_variant(Variant::kDiscounted);
      universal.schedule = StepSchedule::kUniversal;
      VariantSpec adaptive = make_variant(Variant::kDiscounted);
      adaptive.schedule = StepSchedule::kAdaptive;
      for (auto* spec : {&universal, &adaptive}) {
        spec->gamma = 0.99;
        spec->alpha = 1000.0;
        spec->h = 1000.0;
      }
      config.variants = {universal, adaptive};
      config.horizon = 1000000;
      break;
    }
    default:
      throw std::invalid_argument("appendix_c_figure_config: figure must be 1, 2 or 4");
  }
  config.header_note = "figure=" + std::to_string(figure);
  return config;
}

ExperimentConfig rate_experiment_config() {
  ExperimentConfig config;
  config.mdp_source = "appendix-c";
  config.alpha = 6.0;
  config.h = 6.0;
  config.horizon = 1000000;
  config.replications = 200;
  config.variants = {make_variant(Variant::kAdaptiveSet)};
  config.header_note = "rate-experiment";
  return config;
}

double last_decade_window(long horizon) {
  if (horizon < 10) throw std::invalid_argument("last_decade_window: horizon must be >= 10");
  return std::log(10.0) / std::log(static_cast<double>(horizon));
}

namespace {

MetricSeries run_figure3(const AppendixCOptions& options) {
  auto [mdp, behavior] = build_appendix_c();
  const int replications = options.replications.value_or(100);
  const long horizon = options.horizon.value_or(100000);
  const uint64_t base_seed = options.base_seed.value_or(kDefaultBaseSeed);
  const std::vector<long> grid = checkpoint_grid(horizon);

  const SolveReport star = solve_bellman(mdp);
  const BehaviorPolicy pi_star = greedy_policy(star.fixed_point);
  const FrequencyMatrix d = stationary_frequency(mdp, behavior);
  const SolveReport bar = solve_async_bellman(mdp, d);
  const BehaviorPolicy pi_bar = greedy_policy(bar.fixed_point);

  LearnerConfig lc;
  lc.variant = Variant::kAdaptiveSet;
  lc.alpha = 2.0;
  lc.h = 2.0;
  lc.bound_check = true;

  // Learn, tracking exact-recovery of the optimal policy at each checkpoint,
  // then roll out each replication's final greedy policy.
  std::vector<std::vector<double>> recovery(static_cast<size_t>(replications));
  std::vector<BehaviorPolicy> finals(static_cast<size_t>(replications));
  parallel_for_index(replications, options.workers, [&](long r) {
    Learner learner(mdp, behavior, lc, RngStream::for_replication(base_seed, r));
    std::vector<double> rec;
    rec.reserve(grid.size());
    size_t gi = 0;
    for (long k = 1; k <= horizon; ++k) {
      learner.step();
      if (gi < grid.size() && k == grid[gi]) {
        rec.push_back(greedy_policy(learner.q()) == pi_star ? 1.0 : 0.0);
        ++gi;
      }
    }
    recovery[static_cast<size_t>(r)] = std::move(rec);
    finals[static_cast<size_t>(r)] = greedy_policy(learner.q());
  });

  const uint64_t rollout_seed = mix_seed(base_seed, 0x524F4C4Cull);  // distinct stream
  std::vector<std::vector<double>> adaptive_rollouts(static_cast<size_t>(replications));
  parallel_for_index(replications, options.workers, [&](long r) {
    RngStream rng = RngStream::for_replication(rollout_seed, static_cast<uint64_t>(r));
    std::vector<double> averages;
    averages.reserve(grid.size());
    double total = 0.0;
    size_t gi = 0;
    int state = 0;
    const BehaviorPolicy& policy = finals[static_cast<size_t>(r)];
    for (long k = 1; k <= horizon && gi < grid.size(); ++k) {
      auto [a, s2, reward] = sample_step(mdp, policy, state, rng);
      total += reward;
      state = s2;
      if (k == grid[gi]) {
        averages.push_back(total / static_cast<double>(k));
        ++gi;
      }
    }
    adaptive_rollouts[static_cast<size_t>(r)] = std::move(averages);
  });

  const std::vector<MeanStderr> qbar_rollout =
      policy_rollout(mdp, pi_bar, horizon, replications, mix_seed(base_seed, 0x51424152ull), grid,
                     options.workers);

  MetricSeries series;
  {
    ExperimentConfig echo;
    echo.mdp_source = "appendix-c";
    echo.horizon = horizon;
    echo.replications = replications;
    echo.base_seed = base_seed;
    echo.variants = {make_variant(Variant::kAdaptiveSet)};
    echo.header_note = "figure=3 rollouts=greedy_adaptive,greedy_qbar";
    series.header = config_header(echo);
  }
  series.checkpoints = grid;

  VariantSeries adaptive_series;
  adaptive_series.label = "greedy_adaptive";
  adaptive_series.metric_names = {"running_avg_reward", "pi_star_recovery_rate"};
  adaptive_series.metric_values.resize(2);
  std::vector<double> column(static_cast<size_t>(replications));
  for (size_t c = 0; c < grid.size(); ++c) {
    for (size_t r = 0; r < adaptive_rollouts.size(); ++r) column[r] = adaptive_rollouts[r][c];
    adaptive_series.metric_values[0].push_back(mean_stderr(column));
    for (size_t r = 0; r < recovery.size(); ++r) column[r] = recovery[r][c];
    adaptive_series.metric_values[1].push_back(mean_stderr(column));
  }
  series.variants.push_back(std::move(adaptive_series));

  VariantSeries qbar_series;
  qbar_series.label = "greedy_qbar";
  qbar_series.metric_names = {"running_avg_reward"};
  qbar_series.metric_values = {qbar_rollout};
  series.variants.push_back(std::move(qbar_series));
  return series;
}

}  // namespace

MetricSeries run_appendix_c_figure(const AppendixCOptions& options) {
  if (options.figure < 1 || options.figure > 4) {
    throw std::invalid_argument("run_appendix_c_figure: figure must be in 1..4");
  }
  MetricSeries series;
  if (options.figure == 3) {
    series = run_figure3(options);
  } else {
    ExperimentConfig config = appendix_c_figure_config(options.figure);
    if (options.replications) config.replications = *options.replications;
    if (options.horizon) config.horizon = *options.horizon;
    if (options.base_seed) config.base_seed = *options.base_seed;
    series = run_experiment(config, options.workers);
  }
  if (options.write_outputs) {
    std::filesystem::create_directories(options.out_dir);
    const std::string base =
        (std::filesystem::path(options.out_dir) / ("figure" + std::to_string(options.figure)))
            .string();
    emit_csv(series, base + ".csv");
    emit_json(series, base + ".json");
  }
  return series;
}

}  // namespace avgq
