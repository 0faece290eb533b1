#pragma once

#include <span>
#include <string>
#include <vector>

namespace avgq {

/// A one-step sample (s0, a0) -> s1 drawn from the environment.
struct TransitionTriple {
  int s0 = 0;
  int a0 = 0;
  int s1 = 0;
};

/// Finite MDP with transition kernel p(s'|s,a) and bounded rewards R(s,a)
/// in [-1, 1]. Immutable after validation; every operator takes it by
/// const reference.
struct TabularMdp {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> transition;  // [s][a][s'], row-major
  std::vector<double> reward;      // [s][a]
  std::string name;

  int n_pairs() const { return n_states * n_actions; }
  int pair_index(int s, int a) const { return s * n_actions + a; }

  double p(int s, int a, int s2) const {
    return transition[(static_cast<size_t>(s) * n_actions + a) * n_states + s2];
  }
  double r(int s, int a) const { return reward[static_cast<size_t>(s) * n_actions + a]; }

  std::span<const double> transition_row(int s, int a) const {
    return {transition.data() + (static_cast<size_t>(s) * n_actions + a) * n_states,
            static_cast<size_t>(n_states)};
  }

  /// Checks shapes, row-stochasticity (1e-12), and |R| <= 1.
  /// Throws ModelError on violation.
  void validate() const;

  /// Validates and returns the model.
  static TabularMdp make(int n_states, int n_actions, std::vector<double> transition,
                         std::vector<double> reward, std::string name = "");
};

/// Action-value table indexed by flattened (s, a).
struct QTable {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> values;  // [s][a]

  QTable() = default;
  QTable(int n_states, int n_actions, double fill = 0.0)
      : n_states(n_states),
        n_actions(n_actions),
        values(static_cast<size_t>(n_states) * n_actions, fill) {}

  static QTable zeros_like(const TabularMdp& mdp) { return QTable(mdp.n_states, mdp.n_actions); }

  double& operator()(int s, int a) { return values[static_cast<size_t>(s) * n_actions + a]; }
  double operator()(int s, int a) const { return values[static_cast<size_t>(s) * n_actions + a]; }

  int size() const { return n_states * n_actions; }
  bool same_shape(const QTable& other) const {
    return n_states == other.n_states && n_actions == other.n_actions;
  }

  double max_over_actions(int s) const;
};

/// Per-state categorical action distribution pi(a|s).
struct BehaviorPolicy {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> probs;  // [s][a]

  double pi(int s, int a) const { return probs[static_cast<size_t>(s) * n_actions + a]; }
  std::span<const double> row(int s) const {
    return {probs.data() + static_cast<size_t>(s) * n_actions, static_cast<size_t>(n_actions)};
  }

  /// Rows must sum to 1 within 1e-12. full_support additionally requires
  /// pi(a|s) > 0 everywhere (needed when the policy drives learning).
  void validate(bool full_support) const;

  static BehaviorPolicy make(int n_states, int n_actions, std::vector<double> probs,
                             bool full_support = true);

  /// Uniform distribution over actions in every state.
  static BehaviorPolicy uniform(int n_states, int n_actions);

  /// One-hot policy taking action[s] at state s.
  static BehaviorPolicy deterministic(int n_states, int n_actions,
                                      const std::vector<int>& action);

  bool operator==(const BehaviorPolicy&) const = default;
};

/// Diagonal of a per-pair weighting matrix: visitation frequencies D(s,a).
/// Entries are in [0, 1]; operators that divide by entries (the asynchronous
/// update, the sampled update operator) require them strictly positive.
struct FrequencyMatrix {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> diag;  // [s][a]

  double at(int s, int a) const { return diag[static_cast<size_t>(s) * n_actions + a]; }
  double min_entry() const;

  /// Entries must lie in [0, 1] (tiny negative solver noise is clamped).
  static FrequencyMatrix make(int n_states, int n_actions, std::vector<double> diag);

  /// D(s,a) = 1/(|S||A|) for every pair.
  static FrequencyMatrix uniform(int n_states, int n_actions);
};

}  // namespace avgq
