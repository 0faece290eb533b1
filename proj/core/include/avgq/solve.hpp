#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "avgq/mdp.hpp"

namespace avgq {

/// Result of a fixed-point solve. The fixed point is centered
/// (max + min = 0) so one representative of each shift class is pinned.
struct SolveReport {
  QTable fixed_point;
  double residual = 0.0;  // span(T(Q) - Q) at exit
  long iterations = 0;
  std::optional<double> gain;  // mean of T(Q) - Q entries (r* when T is the Bellman operator)
  std::vector<double> residual_trace;  // residual per iteration, for diagnostics
};

/// Iterates Q <- center(T(Q)) until span(T(Q) - Q) <= tol. T must contract in
/// the span seminorm (certify via tv_contraction_factor, or via the
/// asynchronous factor 1 - (1 - beta) * D_min).
///
/// Throws ConvergenceError when max_iter is exceeded, or when the residual
/// increases across 10 consecutive iterations (non-contractive operator).
SolveReport seminorm_fixed_point(const std::function<QTable(const QTable&)>& op, QTable q0,
                                 double tol = 1e-12, long max_iter = 1'000'000);

/// Solves the undiscounted optimality equation: returns the centered relative
/// action-value table and the optimal gain (all entries of H(Q)-Q agree at
/// the fixed point, and `gain` is their mean).
SolveReport solve_bellman(const TabularMdp& mdp, double tol = 1e-12, long max_iter = 1'000'000);

/// Solves the asynchronous fixed-point equation for visitation weights d.
SolveReport solve_async_bellman(const TabularMdp& mdp, const FrequencyMatrix& d,
                                double tol = 1e-12, long max_iter = 1'000'000);

struct DiscountedSolveDetails {
  long iterations = 0;
  double residual = 0.0;               // ||H_g(Q) - Q||_inf at exit
  std::vector<double> residual_trace;  // geometric decay certificate
};

/// Sup-norm value iteration for the gamma-discounted problem.
QTable discounted_value_iteration(const TabularMdp& mdp, double gamma, double tol = 1e-10,
                                  long max_iter = 1'000'000,
                                  DiscountedSolveDetails* details = nullptr);

/// One-hot policy choosing, per state, the lowest-index maximizing action.
/// Invariant under Q -> Q + c*e.
BehaviorPolicy greedy_policy(const QTable& q);

/// Exact long-run average reward of a policy, via the stationary distribution
/// of the induced chain: sum_{s,a} mu(s) pi(a|s) R(s,a).
double policy_average_reward(const TabularMdp& mdp, const BehaviorPolicy& policy);

struct PolicySearchResult {
  BehaviorPolicy policy;
  double gain = 0.0;
};

/// Brute-force enumeration of all deterministic policies (skipped above
/// 2^20 policies; returns nullopt). Policies inducing a reducible or periodic
/// chain are skipped. Cross-check oracle for the optimal gain.
std::optional<PolicySearchResult> best_deterministic_policy(const TabularMdp& mdp);

}  // namespace avgq
