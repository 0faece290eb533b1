#pragma once

#include <vector>

#include "avgq/mdp.hpp"

namespace avgq {

/// Transition matrix of the Markov chain on state-action pairs induced by a
/// behavior policy: P[(s,a) -> (s',a')] = p(s'|s,a) * pi(a'|s').
/// Row-major, size n_pairs x n_pairs.
std::vector<double> state_action_chain(const TabularMdp& mdp, const BehaviorPolicy& policy);

/// Verifies that the state chain induced by the policy is irreducible and
/// aperiodic; throws ModelError naming the offending structure otherwise.
void check_ergodic(const TabularMdp& mdp, const BehaviorPolicy& policy);

/// Stationary distribution of a pair chain as produced by state_action_chain,
/// solved directly (one stationarity equation replaced by the normalization
/// row). `n_pairs` must equal n_states * n_actions of the owning model.
std::vector<double> stationary_distribution(const std::vector<double>& chain, int n_pairs);

/// Convenience wrapper: checks ergodicity, builds the pair chain, and returns
/// its stationary distribution D(s,a) = mu(s) * pi(a|s) as a FrequencyMatrix.
FrequencyMatrix stationary_frequency(const TabularMdp& mdp, const BehaviorPolicy& policy);

}  // namespace avgq
