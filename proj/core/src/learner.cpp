#include "avgq/learner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "avgq/errors.hpp"
#include "avgq/span.hpp"

namespace avgq {

void LearnerConfig::validate(const TabularMdp& mdp) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("LearnerConfig: alpha must be positive");
  if (!(h > 0.0)) throw std::invalid_argument("LearnerConfig: h must be positive");
  if (!(h > alpha - 1.0)) {
    throw std::invalid_argument("LearnerConfig: need h > alpha - 1 so stepsizes stay in (0,1)");
  }
  if (variant == Variant::kDiscounted) {
    if (!(gamma > 0.0) || gamma >= 1.0) {
      throw std::invalid_argument("LearnerConfig: gamma must lie in (0,1)");
    }
    if (bound_check) {
      throw std::invalid_argument(
          "LearnerConfig: bound_check applies to undiscounted learners only");
    }
  }
  if (initial_state < 0 || initial_state >= mdp.n_states) {
    throw std::invalid_argument("LearnerConfig: initial_state out of range");
  }
  if (q1 && (q1->n_states != mdp.n_states || q1->n_actions != mdp.n_actions)) {
    throw std::invalid_argument("LearnerConfig: q1 shape does not match the MDP");
  }
}

FrequencyMatrix VisitState::frequencies(int n_states) const {
  std::vector<double> diag(counts.size());
  const double denom = static_cast<double>(step) + offset_h;
  for (size_t i = 0; i < counts.size(); ++i) {
    diag[i] = (static_cast<double>(counts[i]) + offset_h) / denom;
  }
  return FrequencyMatrix::make(n_states, n_actions, std::move(diag));
}

double log_growth_bound(long k, double alpha, double h, int n_pairs) {
  if (k < 1) throw std::invalid_argument("log_growth_bound: k must be >= 1");
  const long m = (k - 1 + n_pairs - 1) / n_pairs;  // ceil((k-1)/n_pairs)
  return alpha * n_pairs * std::log((static_cast<double>(m) + h) / h);
}

std::tuple<int, int, double> sample_step(const TabularMdp& mdp, const BehaviorPolicy& policy,
                                         int state, RngStream& rng) {
  const int a = sample_categorical(policy.row(state), rng.next_uniform());
  const int s2 = sample_categorical(mdp.transition_row(state, a), rng.next_uniform());
  return {a, s2, mdp.r(state, a)};
}

double temporal_difference(const TabularMdp& mdp, const QTable& q, TransitionTriple y) {
  return mdp.r(y.s0, y.a0) + q.max_over_actions(y.s1) - q(y.s0, y.a0);
}

Learner::Learner(const TabularMdp& mdp, const BehaviorPolicy& policy, LearnerConfig config,
                 RngStream rng)
    : mdp_(mdp), policy_(policy), config_(std::move(config)), rng_(rng) {
  config_.validate(mdp_);
  policy_.validate(/*full_support=*/true);
  q_ = config_.q1 ? *config_.q1 : QTable::zeros_like(mdp_);
  span_q1_ = span(q_.values);
  visits_.counts.assign(static_cast<size_t>(mdp_.n_pairs()), 0);
  visits_.offset_h = config_.h;
  visits_.n_actions = mdp_.n_actions;
  state_ = config_.initial_state;
  discounted_ = config_.variant == Variant::kDiscounted;
  adaptive_clock_ = !(config_.variant == Variant::kUniversal ||
                      (discounted_ && config_.schedule == StepSchedule::kUniversal));
}

double Learner::current_growth_bound() const {
  return log_growth_bound(visits_.step + 1, config_.alpha, config_.h, mdp_.n_pairs()) + span_q1_;
}

StepInfo Learner::step() {
  const long k = visits_.step + 1;
  auto [a, s2, r] = sample_step(mdp_, policy_, state_, rng_);

  const double vmax = q_.max_over_actions(s2);
  const double td = r + (discounted_ ? config_.gamma * vmax : vmax) - q_(state_, a);

  // The counter includes the step-k visit, so the first update to a pair
  // uses alpha/(1+h).
  visits_.counts[static_cast<size_t>(state_) * mdp_.n_actions + a] += 1;
  visits_.step = k;

  const double denom =
      adaptive_clock_ ? static_cast<double>(visits_.count(state_, a)) : static_cast<double>(k);
  const double stepsize = config_.alpha / (denom + config_.h);
  q_(state_, a) += stepsize * td;

  if (config_.variant == Variant::kAdaptiveCentered) {
    center_in_place(q_.values);
  } else if (config_.variant == Variant::kGeneric && config_.kernel_shift) {
    const double c = config_.kernel_shift(q_);
    if (!std::isfinite(c)) throw std::invalid_argument("kernel_shift returned a non-finite value");
    for (double& v : q_.values) v += c;
  }

  if (config_.bound_check) {
    const double s = span(q_.values);
    const double bound = current_growth_bound();
    if (s > bound + 1e-9) {
      throw BoundViolationError("growth bound violated at step " + std::to_string(k) + ": span " +
                                    std::to_string(s) + " > " + std::to_string(bound),
                                k, s, bound);
    }
  }

  StepInfo info{k, state_, a, s2, r, td, stepsize};
  state_ = s2;
  return info;
}

}  // namespace avgq
