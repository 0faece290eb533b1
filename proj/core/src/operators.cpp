#include "avgq/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace avgq {

namespace {

void check_shapes(const TabularMdp& mdp, const QTable& q, const char* who) {
  if (q.n_states != mdp.n_states || q.n_actions != mdp.n_actions) {
    throw std::invalid_argument(std::string(who) + ": Q shape does not match the MDP");
  }
}

void check_weights(const TabularMdp& mdp, const FrequencyMatrix& d, const char* who,
                   bool strictly_positive) {
  if (d.n_states != mdp.n_states || d.n_actions != mdp.n_actions) {
    throw std::invalid_argument(std::string(who) + ": weight shape does not match the MDP");
  }
  if (strictly_positive && d.min_entry() <= 0.0) {
    throw std::invalid_argument(std::string(who) + ": weights must be strictly positive");
  }
}

}  // namespace

QTable bellman(const TabularMdp& mdp, const QTable& q) {
  return bellman_discounted(mdp, q, 1.0);
}

QTable bellman_discounted(const TabularMdp& mdp, const QTable& q, double gamma) {
  check_shapes(mdp, q, "bellman");
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw std::invalid_argument("bellman: gamma must lie in (0,1]");
  }
  std::vector<double> vmax(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) vmax[s] = q.max_over_actions(s);

  QTable out(mdp.n_states, mdp.n_actions);
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      double acc = 0.0;
      const auto row = mdp.transition_row(s, a);
      for (int s2 = 0; s2 < mdp.n_states; ++s2) acc += row[s2] * vmax[s2];
      out(s, a) = mdp.r(s, a) + gamma * acc;
    }
  }
  return out;
}

double tv_contraction_factor(const TabularMdp& mdp) {
  const int pairs = mdp.n_pairs();
  double beta = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const double* pi = mdp.transition.data() + static_cast<size_t>(i) * mdp.n_states;
    for (int j = i + 1; j < pairs; ++j) {
      const double* pj = mdp.transition.data() + static_cast<size_t>(j) * mdp.n_states;
      double tv = 0.0;
      for (int s2 = 0; s2 < mdp.n_states; ++s2) tv += std::abs(pi[s2] - pj[s2]);
      beta = std::max(beta, tv / 2.0);
    }
  }
  return beta;
}

QTable async_bellman(const TabularMdp& mdp, const QTable& q, const FrequencyMatrix& d) {
  return async_bellman_discounted(mdp, q, d, 1.0);
}

QTable async_bellman_discounted(const TabularMdp& mdp, const QTable& q, const FrequencyMatrix& d,
                                double gamma) {
  check_shapes(mdp, q, "async_bellman");
  check_weights(mdp, d, "async_bellman", /*strictly_positive=*/true);
  QTable hq = bellman_discounted(mdp, q, gamma);
  QTable out(mdp.n_states, mdp.n_actions);
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      const double w = d.at(s, a);
      out(s, a) = (1.0 - w) * q(s, a) + w * hq(s, a);
    }
  }
  return out;
}

QTable sampled_update(const TabularMdp& mdp, const QTable& q, const FrequencyMatrix& d,
                      TransitionTriple y) {
  check_shapes(mdp, q, "sampled_update");
  check_weights(mdp, d, "sampled_update", /*strictly_positive=*/true);
  if (y.s0 < 0 || y.s0 >= mdp.n_states || y.a0 < 0 || y.a0 >= mdp.n_actions || y.s1 < 0 ||
      y.s1 >= mdp.n_states) {
    throw std::invalid_argument("sampled_update: transition indices out of range");
  }
  QTable out = q;
  const double td = mdp.r(y.s0, y.a0) + q.max_over_actions(y.s1) - q(y.s0, y.a0);
  out(y.s0, y.a0) += td / d.at(y.s0, y.a0);
  return out;
}

QTable sampled_update(const TabularMdp& mdp, const QTable& q, TransitionTriple y) {
  FrequencyMatrix ones{mdp.n_states, mdp.n_actions,
                       std::vector<double>(static_cast<size_t>(mdp.n_pairs()), 1.0)};
  return sampled_update(mdp, q, ones, y);
}

}  // namespace avgq
