#pragma once

#include <string>

#include "avgq/experiment.hpp"
#include "avgq/mdp.hpp"
#include "avgq/solve.hpp"

namespace avgq {

/// MDP definition file: {"n_states", "n_actions", "transition" (nested
/// [s][a][s']), "reward" ([s][a]), optional "name"}. Unknown keys are
/// rejected. Structural problems throw std::invalid_argument; stochastic
/// violations throw ModelError.
TabularMdp load_mdp_json(const std::string& path);
void save_mdp_json(const TabularMdp& mdp, const std::string& path);

/// Policy file: nested [s][a] row-stochastic array.
BehaviorPolicy load_policy_json(const std::string& path, bool full_support = true);

/// Experiment configuration file mirroring ExperimentConfig. Unknown keys
/// anywhere are rejected.
ExperimentConfig load_experiment_config(const std::string& path);

/// Serialized solve summary: fixed_point (nested [s][a]), gain, residual,
/// iterations, beta, beta_bar, d_min.
std::string solve_report_to_json(const SolveReport& report, double beta, double beta_bar,
                                 double d_min);

}  // namespace avgq
