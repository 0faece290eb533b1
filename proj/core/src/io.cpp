#include "avgq/io.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <stdexcept>

#include "avgq/errors.hpp"

namespace avgq {

namespace {

using nlohmann::json;

json parse_file(const std::string& path, const char* what) {
  std::ifstream f(path);
  if (!f) {
    throw std::invalid_argument(std::string(what) + ": cannot open '" + path + "'");
  }
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string(what) + ": '" + path + "' is not valid JSON: " +
                                e.what());
  }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw std::invalid_argument(context + ": unknown key '" + it.key() + "'");
    }
  }
}

std::vector<double> flatten_2d(const json& arr, int rows, int cols, const std::string& context) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != rows) {
    throw std::invalid_argument(context + ": expected " + std::to_string(rows) + " rows");
  }
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(rows) * cols);
  for (const auto& row : arr) {
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw std::invalid_argument(context + ": expected rows of length " + std::to_string(cols));
    }
    for (const auto& v : row) {
      if (!v.is_number()) throw std::invalid_argument(context + ": non-numeric entry");
      flat.push_back(v.get<double>());
    }
  }
  return flat;
}

json nested_2d(const std::vector<double>& flat, int rows, int cols) {
  json out = json::array();
  for (int r = 0; r < rows; ++r) {
    json row = json::array();
    for (int c = 0; c < cols; ++c) row.push_back(flat[static_cast<size_t>(r) * cols + c]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

TabularMdp load_mdp_json(const std::string& path) {
  const json j = parse_file(path, "load_mdp_json");
  if (!j.is_object()) throw std::invalid_argument("load_mdp_json: top-level value must be an object");
  reject_unknown_keys(j, {"n_states", "n_actions", "transition", "reward", "name"},
                      "load_mdp_json");
  for (const char* key : {"n_states", "n_actions", "transition", "reward"}) {
    if (!j.contains(key)) {
      throw std::invalid_argument(std::string("load_mdp_json: missing key '") + key + "'");
    }
  }
  const int n_states = j.at("n_states").get<int>();
  const int n_actions = j.at("n_actions").get<int>();
  if (n_states < 1 || n_actions < 1) {
    throw std::invalid_argument("load_mdp_json: n_states and n_actions must be positive");
  }

  const json& t = j.at("transition");
  if (!t.is_array() || static_cast<int>(t.size()) != n_states) {
    throw std::invalid_argument("load_mdp_json: transition must have n_states outer entries");
  }
  std::vector<double> transition;
  transition.reserve(static_cast<size_t>(n_states) * n_actions * n_states);
  for (const auto& per_state : t) {
    const auto flat = flatten_2d(per_state, n_actions, n_states, "load_mdp_json: transition");
    transition.insert(transition.end(), flat.begin(), flat.end());
  }
  std::vector<double> reward = flatten_2d(j.at("reward"), n_states, n_actions,
                                          "load_mdp_json: reward");
  std::string name = j.value("name", std::string{});
  return TabularMdp::make(n_states, n_actions, std::move(transition), std::move(reward),
                          std::move(name));
}

void save_mdp_json(const TabularMdp& mdp, const std::string& path) {
  json j;
  j["n_states"] = mdp.n_states;
  j["n_actions"] = mdp.n_actions;
  json t = json::array();
  for (int s = 0; s < mdp.n_states; ++s) {
    json per_state = json::array();
    for (int a = 0; a < mdp.n_actions; ++a) {
      json row = json::array();
      for (int s2 = 0; s2 < mdp.n_states; ++s2) row.push_back(mdp.p(s, a, s2));
      per_state.push_back(std::move(row));
    }
    t.push_back(std::move(per_state));
  }
  j["transition"] = std::move(t);
  j["reward"] = nested_2d(mdp.reward, mdp.n_states, mdp.n_actions);
  if (!mdp.name.empty()) j["name"] = mdp.name;

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_mdp_json: cannot open '" + path + "' for writing");
  f << j.dump(2) << "\n";
}

BehaviorPolicy load_policy_json(const std::string& path, bool full_support) {
  const json j = parse_file(path, "load_policy_json");
  if (!j.is_array() || j.empty() || !j.at(0).is_array() || j.at(0).empty()) {
    throw std::invalid_argument("load_policy_json: expected a nested [state][action] array");
  }
  const int n_states = static_cast<int>(j.size());
  const int n_actions = static_cast<int>(j.at(0).size());
  return BehaviorPolicy::make(n_states, n_actions,
                              flatten_2d(j, n_states, n_actions, "load_policy_json"),
                              full_support);
}

namespace {

VariantSpec parse_variant(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config variants: entries must be objects");
  reject_unknown_keys(j, {"kind", "schedule", "gamma", "shift", "alpha", "h", "label"},
                      "config variant");
  if (!j.contains("kind")) throw std::invalid_argument("config variant: missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  VariantSpec spec;
  if (kind == "adaptive_set") {
    spec.kind = Variant::kAdaptiveSet;
  } else if (kind == "adaptive_centered") {
    spec.kind = Variant::kAdaptiveCentered;
  } else if (kind == "generic") {
    spec.kind = Variant::kGeneric;
    spec.shift = j.value("shift", std::string("none"));
  } else if (kind == "universal") {
    spec.kind = Variant::kUniversal;
  } else if (kind == "discounted") {
    spec.kind = Variant::kDiscounted;
    spec.gamma = j.value("gamma", 0.99);
    const std::string schedule = j.value("schedule", std::string("adaptive"));
    if (schedule == "adaptive") {
      spec.schedule = StepSchedule::kAdaptive;
    } else if (schedule == "universal") {
      spec.schedule = StepSchedule::kUniversal;
    } else {
      throw std::invalid_argument("config variant: unknown schedule '" + schedule + "'");
    }
  } else {
    throw std::invalid_argument("config variant: unknown kind '" + kind + "'");
  }
  if (j.contains("alpha")) spec.alpha = j.at("alpha").get<double>();
  if (j.contains("h")) spec.h = j.at("h").get<double>();
  spec.label_override = j.value("label", std::string{});
  return spec;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  const json j = parse_file(path, "load_experiment_config");
  if (!j.is_object()) {
    throw std::invalid_argument("load_experiment_config: top-level value must be an object");
  }
  reject_unknown_keys(j,
                      {"mdp", "policy", "variants", "alpha", "h", "horizon", "replications",
                       "base_seed", "initial_state", "bound_check", "gamma", "targets",
                       "output_csv", "output_json"},
                      "load_experiment_config");
  ExperimentConfig config;
  config.mdp_source = j.value("mdp", std::string("appendix-c"));
  if (j.contains("policy")) {
    const json& p = j.at("policy");
    if (p.is_string()) {
      config.policy_source = p.get<std::string>();
    } else if (p.is_array()) {
      const int n_states = static_cast<int>(p.size());
      const int n_actions = n_states > 0 && p.at(0).is_array()
                                ? static_cast<int>(p.at(0).size())
                                : 0;
      if (n_actions == 0) {
        throw std::invalid_argument("load_experiment_config: inline policy must be a nested array");
      }
      config.policy_inline = BehaviorPolicy::make(
          n_states, n_actions, flatten_2d(p, n_states, n_actions, "config policy"));
    } else {
      throw std::invalid_argument("load_experiment_config: 'policy' must be a string or array");
    }
  }
  if (!j.contains("variants")) {
    throw std::invalid_argument("load_experiment_config: missing 'variants'");
  }
  if (!j.at("variants").is_array()) {
    throw std::invalid_argument("load_experiment_config: 'variants' must be an array");
  }
  for (const auto& v : j.at("variants")) config.variants.push_back(parse_variant(v));
  config.alpha = j.value("alpha", config.alpha);
  config.h = j.value("h", config.h);
  config.horizon = j.value("horizon", config.horizon);
  config.replications = j.value("replications", config.replications);
  config.base_seed = j.value("base_seed", config.base_seed);
  config.initial_state = j.value("initial_state", config.initial_state);
  config.bound_check = j.value("bound_check", config.bound_check);
  config.gamma = j.value("gamma", config.gamma);
  if (j.contains("targets")) config.targets = j.at("targets").get<std::vector<std::string>>();
  config.output_csv = j.value("output_csv", config.output_csv);
  config.output_json = j.value("output_json", config.output_json);
  config.validate();
  return config;
}

std::string solve_report_to_json(const SolveReport& report, double beta, double beta_bar,
                                 double d_min) {
  json j;
  j["fixed_point"] = nested_2d(report.fixed_point.values, report.fixed_point.n_states,
                               report.fixed_point.n_actions);
  j["gain"] = report.gain ? json(*report.gain) : json(nullptr);
  j["residual"] = report.residual;
  j["iterations"] = report.iterations;
  j["beta"] = beta;
  j["beta_bar"] = beta_bar;
  j["d_min"] = d_min;
  return j.dump(2);
}

void emit_json(const MetricSeries& series, const std::string& path) {
  if (series.variants.empty()) {
    throw std::invalid_argument("emit_json: series has no variants");
  }
  json j;
  j["header"] = series.header;
  j["checkpoints"] = series.checkpoints;
  json variants = json::array();
  for (const auto& vs : series.variants) {
    json metrics = json::array();
    for (size_t m = 0; m < vs.metric_names.size(); ++m) {
      json means = json::array();
      json stderrs = json::array();
      for (const auto& ms : vs.metric_values[m]) {
        means.push_back(ms.mean);
        stderrs.push_back(ms.std_error);
      }
      metrics.push_back({{"name", vs.metric_names[m]},
                         {"mean", std::move(means)},
                         {"stderr", std::move(stderrs)}});
    }
    variants.push_back({{"label", vs.label}, {"metrics", std::move(metrics)}});
  }
  j["variants"] = std::move(variants);

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_json: cannot open '" + path + "' for writing");
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("emit_json: write failed for '" + path + "'");
}

MetricSeries load_metric_series_json(const std::string& path) {
  const json j = parse_file(path, "load_metric_series_json");
  MetricSeries series;
  series.header = j.at("header").get<std::string>();
  series.checkpoints = j.at("checkpoints").get<std::vector<long>>();
  for (const auto& v : j.at("variants")) {
    VariantSeries vs;
    vs.label = v.at("label").get<std::string>();
    for (const auto& m : v.at("metrics")) {
      vs.metric_names.push_back(m.at("name").get<std::string>());
      const auto means = m.at("mean").get<std::vector<double>>();
      const auto stderrs = m.at("stderr").get<std::vector<double>>();
      if (means.size() != stderrs.size() || means.size() != series.checkpoints.size()) {
        throw std::invalid_argument("load_metric_series_json: ragged metric arrays");
      }
      std::vector<MeanStderr> values(means.size());
      for (size_t i = 0; i < means.size(); ++i) values[i] = {means[i], stderrs[i]};
      vs.metric_values.push_back(std::move(values));
    }
    series.variants.push_back(std::move(vs));
  }
  return series;
}

}  // namespace avgq
