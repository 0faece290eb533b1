#include "avgq/props.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "avgq/chain.hpp"
#include "avgq/mdp.hpp"
#include "avgq/operators.hpp"
#include "avgq/rng.hpp"
#include "avgq/span.hpp"

namespace avgq {

namespace {

constexpr double kTol = 1e-12;

std::vector<double> random_vector(RngStream& rng, int d, double scale) {
  std::vector<double> x(static_cast<size_t>(d));
  for (double& v : x) v = (2.0 * rng.next_uniform() - 1.0) * scale;
  return x;
}

// Strictly positive row-stochastic rows: every TV distance is then < 1.
TabularMdp random_mdp(RngStream& rng, int max_states = 5, int max_actions = 4) {
  const int n_states = 1 + static_cast<int>(rng.next_uniform() * max_states);
  const int n_actions = 1 + static_cast<int>(rng.next_uniform() * max_actions);
  std::vector<double> transition(static_cast<size_t>(n_states) * n_actions * n_states);
  for (int i = 0; i < n_states * n_actions; ++i) {
    double sum = 0.0;
    for (int s2 = 0; s2 < n_states; ++s2) {
      const double v = 0.05 + rng.next_uniform();
      transition[static_cast<size_t>(i) * n_states + s2] = v;
      sum += v;
    }
    double acc = 0.0;
    for (int s2 = 0; s2 < n_states - 1; ++s2) {
      double& v = transition[static_cast<size_t>(i) * n_states + s2];
      v /= sum;
      acc += v;
    }
    transition[static_cast<size_t>(i) * n_states + n_states - 1] = 1.0 - acc;
  }
  std::vector<double> reward(static_cast<size_t>(n_states) * n_actions);
  for (double& v : reward) v = 2.0 * rng.next_uniform() - 1.0;
  return TabularMdp::make(n_states, n_actions, std::move(transition), std::move(reward));
}

BehaviorPolicy random_policy(RngStream& rng, int n_states, int n_actions) {
  std::vector<double> probs(static_cast<size_t>(n_states) * n_actions);
  for (int s = 0; s < n_states; ++s) {
    double sum = 0.0;
    for (int a = 0; a < n_actions; ++a) {
      const double v = 0.05 + rng.next_uniform();
      probs[static_cast<size_t>(s) * n_actions + a] = v;
      sum += v;
    }
    double acc = 0.0;
    for (int a = 0; a < n_actions - 1; ++a) {
      double& v = probs[static_cast<size_t>(s) * n_actions + a];
      v /= sum;
      acc += v;
    }
    probs[static_cast<size_t>(s) * n_actions + n_actions - 1] = 1.0 - acc;
  }
  return BehaviorPolicy::make(n_states, n_actions, std::move(probs));
}

QTable random_q(RngStream& rng, const TabularMdp& mdp, double scale = 5.0) {
  QTable q(mdp.n_states, mdp.n_actions);
  q.values = random_vector(rng, mdp.n_pairs(), scale);
  return q;
}

using TrialFn = std::function<double(RngStream&, std::string&)>;

// Runs `trials` trials; a trial fails when its violation (lhs - rhs) exceeds
// the tolerance.
PropertySuiteResult run_suite(const std::string& name, long trials, uint64_t seed,
                              const TrialFn& trial) {
  PropertySuiteResult result;
  result.name = name;
  result.trials = trials;
  RngStream rng(splitmix64(seed ^ std::hash<std::string>{}(name)));
  for (long t = 0; t < trials; ++t) {
    std::string detail;
    const double violation = trial(rng, detail);
    if (violation > result.worst_violation) result.worst_violation = violation;
    if (violation > 0.0) {
      ++result.failures;
      if (result.detail.empty()) {
        std::ostringstream os;
        os << "trial " << t << ": " << detail << " (violation " << violation << ")";
        result.detail = os.str();
      }
    }
  }
  return result;
}

}  // namespace

std::vector<PropertySuiteResult> run_property_suites(long trials, uint64_t seed) {
  std::vector<PropertySuiteResult> results;

  results.push_back(run_suite("span_projection_identity", trials, seed,
                              [](RngStream& rng, std::string& detail) {
    const int d = 1 + static_cast<int>(rng.next_uniform() * 8);
    const auto x = random_vector(rng, d, 10.0);
    const double g = center_offset(x);
    std::vector<double> shifted(x);
    for (double& v : shifted) v -= g;
    double violation = std::abs(sup_norm(shifted) - span(x)) - kTol;
    if (violation > 0.0) detail = "||x - g(x)e||_inf != span(x)";
    // Any other constant is a strictly worse sup-approximation.
    const double off = (rng.next_uniform() < 0.5 ? -1.0 : 1.0) * (1e-6 + rng.next_uniform());
    std::vector<double> worse(x);
    for (double& v : worse) v -= g + off;
    const double v2 = span(x) - sup_norm(worse) + kTol;
    if (v2 > violation) {
      violation = v2;
      detail = "||x - c'e||_inf <= span(x) for c' != g(x)";
    }
    return violation;
  }));

  results.push_back(run_suite("span_triangle_and_homogeneity", trials, seed,
                              [](RngStream& rng, std::string& detail) {
    const int d = 1 + static_cast<int>(rng.next_uniform() * 8);
    const auto x = random_vector(rng, d, 10.0);
    const auto y = random_vector(rng, d, 10.0);
    std::vector<double> sum(x);
    for (int i = 0; i < d; ++i) sum[i] += y[i];
    double violation = span(sum) - (span(x) + span(y)) - kTol;
    if (violation > 0.0) detail = "triangle inequality";
    const double a = 4.0 * rng.next_uniform() - 2.0;
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= a;
    const double v2 = std::abs(span(scaled) - std::abs(a) * span(x)) - kTol;
    if (v2 > violation) {
      violation = v2;
      detail = "absolute homogeneity";
    }
    return violation;
  }));

  results.push_back(run_suite("centered_sup_span_sandwich", trials, seed,
                              [](RngStream& rng, std::string& detail) {
    const int d = 2 + static_cast<int>(rng.next_uniform() * 7);
    const auto x = centered(random_vector(rng, d, 10.0));
    const auto y = centered(random_vector(rng, d, 10.0));
    const double sd = span_dist(x, y);
    const double su = sup_dist(x, y);
    double violation = sd - su - kTol;
    if (violation > 0.0) detail = "span_dist > sup_dist";
    const double v2 = su - 2.0 * sd - kTol;
    if (v2 > violation) {
      violation = v2;
      detail = "sup_dist > 2 * span_dist on centered vectors";
    }
    return violation;
  }));

  results.push_back(run_suite("bellman_nonexpansive_affine_growth", trials, seed,
                              [](RngStream& rng, std::string& detail) {
    const TabularMdp mdp = random_mdp(rng);
    const QTable q1 = random_q(rng, mdp);
    const QTable q2 = random_q(rng, mdp);
    const QTable h1 = bellman(mdp, q1);
    const QTable h2 = bellman(mdp, q2);
    double violation =
        span_dist(h1.values, h2.values) - span_dist(q1.values, q2.values) - kTol;
    if (violation > 0.0) detail = "span non-expansiveness";
    const double v2 = sup_dist(h1.values, h2.values) - sup_dist(q1.values, q2.values) - kTol;
    if (v2 > violation) {
      violation = v2;
      detail = "sup non-expansiveness";
    }
    const double v3 = span(h1.values) - (span(q1.values) + 1.0) - kTol;
    if (v3 > violation) {
      violation = v3;
      detail = "affine growth span(H(Q)) <= span(Q) + 1";
    }
    return violation;
  }));

  results.push_back(run_suite("bellman_certified_contraction", trials, seed,
                              [](RngStream& rng, std::string& detail) {
    const TabularMdp mdp = random_mdp(rng);
    const double beta = tv_contraction_factor(mdp);
    double violation = beta - (1.0 - 1e-9);
    if (violation > 0.0) {
      detail = "random positive-row model should certify beta < 1";
      return violation;
    }
    const QTable q1 = random_q(rng, mdp);
    const QTable q2 = random_q(rng, mdp);
    violation = span_dist(bellman(mdp, q1).values, bellman(mdp, q2).values) -
                beta * span_dist(q1.values, q2.values) - kTol;
    if (violation > 0.0) detail = "span(H(Q1)-H(Q2)) > beta * span(Q1-Q2)";
    return violation;
  }));

  results.push_back(run_suite("async_bellman_contraction", trials, seed,
                              [](RngStream& rng, std::string& detail) {
    const TabularMdp mdp = random_mdp(rng);
    const double beta = tv_contraction_factor(mdp);
    std::vector<double> diag(static_cast<size_t>(mdp.n_pairs()));
    for (double& v : diag) v = 0.05 + 0.95 * rng.next_uniform();
    const FrequencyMatrix d{mdp.n_states, mdp.n_actions, diag};
    const double beta_bar = 1.0 - (1.0 - beta) * d.min_entry();
    const QTable q1 = random_q(rng, mdp);
    const QTable q2 = random_q(rng, mdp);
    const double violation =
        span_dist(async_bellman(mdp, q1, d).values, async_bellman(mdp, q2, d).values) -
        beta_bar * span_dist(q1.values, q2.values) - kTol;
    if (violation > 0.0) detail = "asynchronous contraction factor exceeded";
    return violation;
  }));

  results.push_back(run_suite("sampled_update_lipschitz_growth", trials, seed,
                              [](RngStream& rng, std::string& detail) {
    const TabularMdp mdp = random_mdp(rng);
    std::vector<double> diag(static_cast<size_t>(mdp.n_pairs()));
    for (double& v : diag) v = 0.05 + 0.95 * rng.next_uniform();
    const FrequencyMatrix d{mdp.n_states, mdp.n_actions, diag};
    TransitionTriple y{static_cast<int>(rng.next_uniform() * mdp.n_states),
                       static_cast<int>(rng.next_uniform() * mdp.n_actions),
                       static_cast<int>(rng.next_uniform() * mdp.n_states)};
    const QTable q1 = random_q(rng, mdp);
    const QTable q2 = random_q(rng, mdp);
    const double weight = d.at(y.s0, y.a0);
    const QTable f1 = sampled_update(mdp, q1, d, y);
    const QTable f2 = sampled_update(mdp, q2, d, y);
    double violation = span_dist(f1.values, f2.values) -
                       (2.0 / weight) * span_dist(q1.values, q2.values) - kTol;
    if (violation > 0.0) detail = "Lipschitz bound 2/D(s0,a0) exceeded";
    const double v2 = span(f1.values) - (2.0 / weight) * (span(q1.values) + 1.0) - kTol;
    if (v2 > violation) {
      violation = v2;
      detail = "growth bound (2/D)(span(Q)+1) exceeded";
    }
    return violation;
  }));

  results.push_back(run_suite("sampled_update_exact_unbiasedness", trials, seed,
                              [](RngStream& rng, std::string& detail) {
    const TabularMdp mdp = random_mdp(rng, 4, 3);
    const BehaviorPolicy policy = random_policy(rng, mdp.n_states, mdp.n_actions);
    const FrequencyMatrix d = stationary_frequency(mdp, policy);
    const QTable q = random_q(rng, mdp);
    // Full enumeration of triples weighted by nu(s,a,s') = D(s,a) p(s'|s,a).
    QTable expectation(mdp.n_states, mdp.n_actions, 0.0);
    for (int s = 0; s < mdp.n_states; ++s) {
      for (int a = 0; a < mdp.n_actions; ++a) {
        for (int s2 = 0; s2 < mdp.n_states; ++s2) {
          const double nu = d.at(s, a) * mdp.p(s, a, s2);
          if (nu == 0.0) continue;
          const QTable f = sampled_update(mdp, q, d, TransitionTriple{s, a, s2});
          for (size_t i = 0; i < f.values.size(); ++i) expectation.values[i] += nu * f.values[i];
        }
      }
    }
    const QTable hq = bellman(mdp, q);
    const double violation = sup_dist(expectation.values, hq.values) - 1e-10;
    if (violation > 0.0) detail = "enumerated mean of F differs from H(Q)";
    return violation;
  }));

  return results;
}

bool all_passed(const std::vector<PropertySuiteResult>& results) {
  for (const auto& r : results) {
    if (!r.passed()) return false;
  }
  return true;
}

}  // namespace avgq
