#pragma once

#include <functional>
#include <optional>
#include <tuple>
#include <vector>

#include "avgq/mdp.hpp"
#include "avgq/rng.hpp"

namespace avgq {

/// Online update rules. The adaptive rules scale the correction by a
/// per-pair clock alpha/(N(s,a)+h); the universal rule uses the global clock
/// alpha/(k+h) regardless of which pair is visited.
enum class Variant {
  kAdaptiveSet,       // per-pair clock, no shift
  kAdaptiveCentered,  // per-pair clock, iterate re-centered after each step
  kGeneric,           // per-pair clock, arbitrary constant shift per step
  kUniversal,         // global clock
  kDiscounted,        // discounted target, schedule chosen separately
};

enum class StepSchedule { kAdaptive, kUniversal };

struct LearnerConfig {
  Variant variant = Variant::kAdaptiveSet;
  double alpha = 2.0;
  double h = 2.0;  // must satisfy h > alpha - 1 so every stepsize is in (0,1)

  // kDiscounted only.
  double gamma = 0.99;
  StepSchedule schedule = StepSchedule::kAdaptive;

  // kGeneric only: returns the constant added (times the all-ones vector) to
  // the freshly updated table. Defaults to no shift.
  std::function<double(const QTable&)> kernel_shift;

  int initial_state = 0;
  std::optional<QTable> q1;  // defaults to the zero table

  // Asserts span(Q) <= growth envelope + span(Q1) after every step. Valid for
  // undiscounted variants only.
  bool bound_check = false;

  void validate(const TabularMdp& mdp) const;
};

/// Per-pair visit counters and the derived empirical frequencies
/// (N(s,a) + h) / (k + h).
struct VisitState {
  std::vector<long> counts;  // [s][a]
  long step = 0;             // completed steps
  double offset_h = 0.0;
  int n_actions = 0;

  long count(int s, int a) const { return counts[static_cast<size_t>(s) * n_actions + a]; }
  double frequency(int s, int a) const {
    return (static_cast<double>(count(s, a)) + offset_h) / (static_cast<double>(step) + offset_h);
  }
  FrequencyMatrix frequencies(int n_states) const;
};

/// What a single step did.
struct StepInfo {
  long k = 0;  // 1-based step index
  int state = 0;
  int action = 0;
  int next_state = 0;
  double reward = 0.0;
  double td = 0.0;
  double stepsize = 0.0;
};

/// Deterministic logarithmic envelope dominating span(Q_k) pathwise for the
/// undiscounted adaptive rules started from the zero table:
/// alpha * n_pairs * log((ceil((k-1)/n_pairs) + h) / h), for the k-th iterate
/// (k = 1 is the initial table).
double log_growth_bound(long k, double alpha, double h, int n_pairs);

/// Draws (action, next_state, reward) for one step from `state`, consuming
/// exactly two uniform draws (action first).
std::tuple<int, int, double> sample_step(const TabularMdp& mdp, const BehaviorPolicy& policy,
                                         int state, RngStream& rng);

/// delta = R(s0,a0) + max_a' Q(s1,a') - Q(s0,a0).
double temporal_difference(const TabularMdp& mdp, const QTable& q, TransitionTriple y);

/// Single-trajectory online learner. Instances own their mutable state
/// (table, counters, RNG) and are single-threaded; run one per thread.
class Learner {
 public:
  Learner(const TabularMdp& mdp, const BehaviorPolicy& policy, LearnerConfig config,
          RngStream rng);

  /// Advances one step; throws BoundViolationError if bound_check trips.
  StepInfo step();

  const QTable& q() const { return q_; }
  const VisitState& visits() const { return visits_; }
  long steps_done() const { return visits_.step; }
  int current_state() const { return state_; }

  /// Growth envelope applicable to the current iterate (the table after
  /// steps_done() steps), plus the initial table's span.
  double current_growth_bound() const;

 private:
  const TabularMdp& mdp_;
  const BehaviorPolicy& policy_;
  LearnerConfig config_;
  RngStream rng_;
  QTable q_;
  VisitState visits_;
  int state_ = 0;
  double span_q1_ = 0.0;
  bool discounted_ = false;
  bool adaptive_clock_ = true;
};

}  // namespace avgq
