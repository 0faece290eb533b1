#include "avgq/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "avgq/errors.hpp"

namespace avgq {

namespace {
constexpr double kRowSumTol = 1e-12;
}

void TabularMdp::validate() const {
  if (n_states < 1 || n_actions < 1) {
    throw ModelError("TabularMdp: n_states and n_actions must be positive");
  }
  const size_t want_t = static_cast<size_t>(n_states) * n_actions * n_states;
  const size_t want_r = static_cast<size_t>(n_states) * n_actions;
  if (transition.size() != want_t) {
    throw ModelError("TabularMdp: transition table has wrong size");
  }
  if (reward.size() != want_r) {
    throw ModelError("TabularMdp: reward table has wrong size");
  }
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      double sum = 0.0;
      for (int s2 = 0; s2 < n_states; ++s2) {
        const double v = p(s, a, s2);
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
          throw ModelError("TabularMdp: p(s'|s=" + std::to_string(s) + ",a=" + std::to_string(a) +
                           ") has an entry outside [0,1]");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > kRowSumTol) {
        throw ModelError("TabularMdp: transition row (s=" + std::to_string(s) +
                         ",a=" + std::to_string(a) + ") sums to " + std::to_string(sum));
      }
      const double rv = r(s, a);
      if (!std::isfinite(rv)) {
        throw ModelError("TabularMdp: R(s=" + std::to_string(s) + ",a=" + std::to_string(a) +
                         ") is not finite");
      }
    }
  }
  // The growth and contraction constants are calibrated to rewards spanning
  // a range of width at most 2 (the normalized case is [-1,1]); wider reward
  // tables must be rescaled upstream.
  double r_lo = reward[0];
  double r_hi = reward[0];
  for (double v : reward) {
    r_lo = std::min(r_lo, v);
    r_hi = std::max(r_hi, v);
  }
  if (r_hi - r_lo > 2.0 + 1e-12) {
    throw ModelError("TabularMdp: reward range " + std::to_string(r_lo) + ".." +
                     std::to_string(r_hi) + " is wider than 2; rescale rewards");
  }
}

TabularMdp TabularMdp::make(int n_states, int n_actions, std::vector<double> transition,
                            std::vector<double> reward, std::string name) {
  TabularMdp mdp{n_states, n_actions, std::move(transition), std::move(reward), std::move(name)};
  mdp.validate();
  return mdp;
}

double QTable::max_over_actions(int s) const {
  const double* row = values.data() + static_cast<size_t>(s) * n_actions;
  double m = row[0];
  for (int a = 1; a < n_actions; ++a) m = std::max(m, row[a]);
  return m;
}

void BehaviorPolicy::validate(bool full_support) const {
  if (n_states < 1 || n_actions < 1 ||
      probs.size() != static_cast<size_t>(n_states) * n_actions) {
    throw ModelError("BehaviorPolicy: shape mismatch");
  }
  for (int s = 0; s < n_states; ++s) {
    double sum = 0.0;
    for (int a = 0; a < n_actions; ++a) {
      const double v = pi(s, a);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw ModelError("BehaviorPolicy: pi(a|s=" + std::to_string(s) + ") outside [0,1]");
      }
      if (full_support && v <= 0.0) {
        throw ModelError("BehaviorPolicy: pi(a=" + std::to_string(a) + "|s=" + std::to_string(s) +
                         ") = 0; full support required");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      throw ModelError("BehaviorPolicy: row s=" + std::to_string(s) + " sums to " +
                       std::to_string(sum));
    }
  }
}

BehaviorPolicy BehaviorPolicy::make(int n_states, int n_actions, std::vector<double> probs,
                                    bool full_support) {
  BehaviorPolicy pi{n_states, n_actions, std::move(probs)};
  pi.validate(full_support);
  return pi;
}

BehaviorPolicy BehaviorPolicy::uniform(int n_states, int n_actions) {
  return make(n_states, n_actions,
              std::vector<double>(static_cast<size_t>(n_states) * n_actions, 1.0 / n_actions));
}

BehaviorPolicy BehaviorPolicy::deterministic(int n_states, int n_actions,
                                             const std::vector<int>& action) {
  if (static_cast<int>(action.size()) != n_states) {
    throw std::invalid_argument("BehaviorPolicy::deterministic: need one action per state");
  }
  std::vector<double> probs(static_cast<size_t>(n_states) * n_actions, 0.0);
  for (int s = 0; s < n_states; ++s) {
    if (action[s] < 0 || action[s] >= n_actions) {
      throw std::invalid_argument("BehaviorPolicy::deterministic: action index out of range");
    }
    probs[static_cast<size_t>(s) * n_actions + action[s]] = 1.0;
  }
  return make(n_states, n_actions, std::move(probs), /*full_support=*/false);
}

double FrequencyMatrix::min_entry() const {
  return *std::min_element(diag.begin(), diag.end());
}

FrequencyMatrix FrequencyMatrix::make(int n_states, int n_actions, std::vector<double> diag) {
  if (n_states < 1 || n_actions < 1 ||
      diag.size() != static_cast<size_t>(n_states) * n_actions) {
    throw std::invalid_argument("FrequencyMatrix: shape mismatch");
  }
  for (double& v : diag) {
    if (!std::isfinite(v) || v < -1e-10 || v > 1.0 + 1e-10) {
      throw std::invalid_argument("FrequencyMatrix: entry outside [0,1]");
    }
    v = std::clamp(v, 0.0, 1.0);
  }
  return FrequencyMatrix{n_states, n_actions, std::move(diag)};
}

FrequencyMatrix FrequencyMatrix::uniform(int n_states, int n_actions) {
  const double v = 1.0 / (static_cast<double>(n_states) * n_actions);
  return FrequencyMatrix{n_states, n_actions,
                         std::vector<double>(static_cast<size_t>(n_states) * n_actions, v)};
}

}  // namespace avgq
