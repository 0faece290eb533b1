#include "avgq/chain.hpp"

#include <Eigen/Dense>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "avgq/errors.hpp"

namespace avgq {

namespace {

// Adjacency of the state chain under the policy: edge s -> s2 iff
// sum_a pi(a|s) p(s2|s,a) > 0.
std::vector<std::vector<int>> state_graph(const TabularMdp& mdp, const BehaviorPolicy& policy) {
  std::vector<std::vector<int>> adj(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int s2 = 0; s2 < mdp.n_states; ++s2) {
      double w = 0.0;
      for (int a = 0; a < mdp.n_actions; ++a) w += policy.pi(s, a) * mdp.p(s, a, s2);
      if (w > 0.0) adj[s].push_back(s2);
    }
  }
  return adj;
}

std::vector<int> reachable_from(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<int> seen(adj.size(), 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        q.push(v);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<double> state_action_chain(const TabularMdp& mdp, const BehaviorPolicy& policy) {
  if (policy.n_states != mdp.n_states || policy.n_actions != mdp.n_actions) {
    throw std::invalid_argument("state_action_chain: policy shape does not match the MDP");
  }
  const int n = mdp.n_pairs();
  std::vector<double> chain(static_cast<size_t>(n) * n, 0.0);
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      const int row = mdp.pair_index(s, a);
      for (int s2 = 0; s2 < mdp.n_states; ++s2) {
        const double ps2 = mdp.p(s, a, s2);
        if (ps2 == 0.0) continue;
        for (int a2 = 0; a2 < mdp.n_actions; ++a2) {
          chain[static_cast<size_t>(row) * n + mdp.pair_index(s2, a2)] = ps2 * policy.pi(s2, a2);
        }
      }
    }
  }
  return chain;
}

void check_ergodic(const TabularMdp& mdp, const BehaviorPolicy& policy) {
  if (policy.n_states != mdp.n_states || policy.n_actions != mdp.n_actions) {
    throw std::invalid_argument("check_ergodic: policy shape does not match the MDP");
  }
  const auto adj = state_graph(mdp, policy);

  // Irreducibility: every state reaches and is reached by state 0.
  const auto fwd = reachable_from(adj, 0);
  std::vector<std::vector<int>> radj(mdp.n_states);
  for (int u = 0; u < mdp.n_states; ++u) {
    for (int v : adj[u]) radj[v].push_back(u);
  }
  const auto bwd = reachable_from(radj, 0);
  for (int s = 0; s < mdp.n_states; ++s) {
    if (!fwd[s]) {
      throw ModelError("state chain reducible: state " + std::to_string(s) +
                       " unreachable from state 0 under this policy");
    }
    if (!bwd[s]) {
      throw ModelError("state chain reducible: state 0 unreachable from state " +
                       std::to_string(s) + " under this policy");
    }
  }

  // Aperiodicity: the period is the gcd over edges (u,v) of level[u]+1-level[v],
  // with levels from a BFS tree rooted at 0. Period 1 required.
  std::vector<int> level(mdp.n_states, -1);
  std::queue<int> q;
  q.push(0);
  level[0] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        q.push(v);
      }
    }
  }
  int period = 0;
  for (int u = 0; u < mdp.n_states; ++u) {
    for (int v : adj[u]) period = std::gcd(period, std::abs(level[u] + 1 - level[v]));
  }
  if (period != 1) {
    throw ModelError("state chain periodic with period " + std::to_string(period) +
                     " under this policy");
  }
}

std::vector<double> stationary_distribution(const std::vector<double>& chain, int n_pairs) {
  if (n_pairs < 1 || chain.size() != static_cast<size_t>(n_pairs) * n_pairs) {
    throw std::invalid_argument("stationary_distribution: chain is not n_pairs x n_pairs");
  }
  // Solve mu^T P = mu^T with sum(mu) = 1: rows of A are (P^T - I) with the
  // last row replaced by ones.
  Eigen::MatrixXd a(n_pairs, n_pairs);
  for (int i = 0; i < n_pairs; ++i) {
    for (int j = 0; j < n_pairs; ++j) {
      a(i, j) = chain[static_cast<size_t>(j) * n_pairs + i] - (i == j ? 1.0 : 0.0);
    }
  }
  a.row(n_pairs - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n_pairs);
  b(n_pairs - 1) = 1.0;

  Eigen::VectorXd mu = a.fullPivLu().solve(b);
  const double residual = (a * mu - b).cwiseAbs().maxCoeff();
  if (!mu.allFinite() || residual > 1e-8) {
    throw ModelError("stationary_distribution: stationarity system is singular "
                     "(chain has no unique stationary distribution)");
  }
  std::vector<double> out(n_pairs);
  for (int i = 0; i < n_pairs; ++i) out[i] = mu(i);
  return out;
}

FrequencyMatrix stationary_frequency(const TabularMdp& mdp, const BehaviorPolicy& policy) {
  check_ergodic(mdp, policy);
  const auto chain = state_action_chain(mdp, policy);
  auto mu = stationary_distribution(chain, mdp.n_pairs());
  return FrequencyMatrix::make(mdp.n_states, mdp.n_actions, std::move(mu));
}

}  // namespace avgq
