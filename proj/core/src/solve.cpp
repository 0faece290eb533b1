#include "avgq/solve.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "avgq/chain.hpp"
#include "avgq/errors.hpp"
#include "avgq/operators.hpp"
#include "avgq/span.hpp"

namespace avgq {

SolveReport seminorm_fixed_point(const std::function<QTable(const QTable&)>& op, QTable q0,
                                 double tol, long max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("seminorm_fixed_point: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("seminorm_fixed_point: max_iter must be >= 1");

  SolveReport report;
  QTable q = std::move(q0);
  center_in_place(q.values);
  int rising = 0;
  double prev_residual = std::numeric_limits<double>::infinity();
  for (long it = 0; it <= max_iter; ++it) {
    QTable tq = op(q);
    const double residual = span_dist(tq.values, q.values);
    report.residual_trace.push_back(residual);
    if (residual <= tol) {
      double mean = 0.0;
      for (size_t i = 0; i < tq.values.size(); ++i) mean += tq.values[i] - q.values[i];
      mean /= static_cast<double>(tq.values.size());
      report.fixed_point = std::move(q);
      report.residual = residual;
      report.iterations = it;
      report.gain = mean;
      return report;
    }
    rising = residual > prev_residual ? rising + 1 : 0;
    if (rising >= 10) {
      throw ConvergenceError(
          "seminorm_fixed_point: residual increased across 10 consecutive iterations; "
          "operator does not appear to be span-contractive (last residual " +
              std::to_string(residual) + ")",
          residual, it);
    }
    prev_residual = residual;
    q = std::move(tq);
    center_in_place(q.values);
  }
  throw ConvergenceError("seminorm_fixed_point: max_iter=" + std::to_string(max_iter) +
                             " exceeded with residual " + std::to_string(prev_residual),
                         prev_residual, max_iter);
}

SolveReport solve_bellman(const TabularMdp& mdp, double tol, long max_iter) {
  return seminorm_fixed_point([&mdp](const QTable& q) { return bellman(mdp, q); },
                              QTable::zeros_like(mdp), tol, max_iter);
}

SolveReport solve_async_bellman(const TabularMdp& mdp, const FrequencyMatrix& d, double tol,
                                long max_iter) {
  return seminorm_fixed_point([&](const QTable& q) { return async_bellman(mdp, q, d); },
                              QTable::zeros_like(mdp), tol, max_iter);
}

QTable discounted_value_iteration(const TabularMdp& mdp, double gamma, double tol, long max_iter,
                                  DiscountedSolveDetails* details) {
  if (!(gamma > 0.0) || gamma >= 1.0) {
    throw std::invalid_argument("discounted_value_iteration: gamma must lie in (0,1)");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("discounted_value_iteration: tol must be positive");

  QTable q = QTable::zeros_like(mdp);
  std::vector<double> trace;
  for (long it = 0; it <= max_iter; ++it) {
    QTable tq = bellman_discounted(mdp, q, gamma);
    const double residual = sup_dist(tq.values, q.values);
    trace.push_back(residual);
    q = std::move(tq);
    if (residual <= tol) {
      if (details) {
        details->iterations = it;
        details->residual = residual;
        details->residual_trace = std::move(trace);
      }
      return q;
    }
  }
  throw ConvergenceError("discounted_value_iteration: max_iter exceeded with residual " +
                             std::to_string(trace.back()),
                         trace.back(), max_iter);
}

BehaviorPolicy greedy_policy(const QTable& q) {
  std::vector<int> best(q.n_states, 0);
  for (int s = 0; s < q.n_states; ++s) {
    double m = q(s, 0);
    for (int a = 1; a < q.n_actions; ++a) {
      if (q(s, a) > m) {
        m = q(s, a);
        best[s] = a;
      }
    }
  }
  return BehaviorPolicy::deterministic(q.n_states, q.n_actions, best);
}

double policy_average_reward(const TabularMdp& mdp, const BehaviorPolicy& policy) {
  const FrequencyMatrix d = stationary_frequency(mdp, policy);
  double gain = 0.0;
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) gain += d.at(s, a) * mdp.r(s, a);
  }
  return gain;
}

std::optional<PolicySearchResult> best_deterministic_policy(const TabularMdp& mdp) {
  const double count = std::pow(static_cast<double>(mdp.n_actions), mdp.n_states);
  if (count > static_cast<double>(1 << 20)) return std::nullopt;

  std::optional<PolicySearchResult> best;
  std::vector<int> actions(mdp.n_states, 0);
  const long total = static_cast<long>(count);
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int s = 0; s < mdp.n_states; ++s) {
      actions[s] = static_cast<int>(c % mdp.n_actions);
      c /= mdp.n_actions;
    }
    auto policy = BehaviorPolicy::deterministic(mdp.n_states, mdp.n_actions, actions);
    double gain;
    try {
      gain = policy_average_reward(mdp, policy);
    } catch (const ModelError&) {
      continue;  // reducible or periodic under this policy
    }
    if (!best || gain > best->gain) best = PolicySearchResult{std::move(policy), gain};
  }
  return best;
}

}  // namespace avgq
