#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "avgq/chain.hpp"
#include "avgq/errors.hpp"
#include "avgq/experiment.hpp"
#include "avgq/io.hpp"
#include "avgq/operators.hpp"
#include "avgq/solve.hpp"
#include "avgq/span.hpp"
#include "test_util.hpp"

namespace {

using namespace avgq;

TEST(TabularMdp, ValidationRejectsBadRows) {
  EXPECT_THROW(TabularMdp::make(1, 1, {0.9}, {0.0}), ModelError);
  EXPECT_THROW(TabularMdp::make(1, 2, {1.0, 1.0, -0.5, 1.5}, {0.0, 0.0}), ModelError);
  EXPECT_THROW(TabularMdp::make(2, 1, {1.0, 0.0, 0.0, 1.0}, {-2.0, 1.0}), ModelError);
  EXPECT_THROW(TabularMdp::make(1, 1, {1.0}, {std::nan("")}), ModelError);
  EXPECT_NO_THROW(TabularMdp::make(1, 1, {1.0}, {1.0}));
}

TEST(Bellman, ZeroTableGivesRewards) {
  auto [mdp, policy] = build_appendix_c();
  const QTable h0 = bellman(mdp, QTable::zeros_like(mdp));
  EXPECT_EQ(h0.values, mdp.reward);
}

TEST(Bellman, ShiftCovariance) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    const TabularMdp mdp = testutil::random_mdp(gen, 2 + t % 4, 1 + t % 3);
    const QTable q = testutil::random_q(gen, mdp);
    const double c = shift(gen);
    QTable q_shifted = q;
    for (double& v : q_shifted.values) v += c;
    const QTable lhs = bellman(mdp, q_shifted);
    QTable rhs = bellman(mdp, q);
    for (double& v : rhs.values) v += c;
    EXPECT_LT(sup_dist(lhs.values, rhs.values), 1e-12);
  }
}

TEST(Bellman, FixedPointResidualIsConstantGain) {
  auto [mdp, policy] = build_appendix_c();
  const SolveReport report = solve_bellman(mdp);
  const QTable hq = bellman(mdp, report.fixed_point);
  for (int i = 0; i < hq.size(); ++i) {
    EXPECT_NEAR(hq.values[i] - report.fixed_point.values[i], 29.0 / 13.0, 1e-9);
  }
}

TEST(Bellman, ShapeMismatchRejected) {
  auto [mdp, policy] = build_appendix_c();
  EXPECT_THROW(bellman(mdp, QTable(3, 2)), std::invalid_argument);
}

TEST(TvContractionFactor, KnownValues) {
  auto [mdp, policy] = build_appendix_c();
  EXPECT_NEAR(tv_contraction_factor(mdp), 0.6, 1e-15);

  // identical rows -> 0
  const TabularMdp same = TabularMdp::make(2, 2,
                                           {0.3, 0.7, 0.3, 0.7, 0.3, 0.7, 0.3, 0.7},
                                           {0.0, 0.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(tv_contraction_factor(same), 0.0);

  // two deterministic rows with disjoint support -> 1
  const TabularMdp det = TabularMdp::make(2, 1, {1.0, 0.0, 0.0, 1.0}, {0.0, 0.0});
  EXPECT_DOUBLE_EQ(tv_contraction_factor(det), 1.0);
}

TEST(Chain, SingleStateSingleAction) {
  const TabularMdp mdp = TabularMdp::make(1, 1, {1.0}, {1.0});
  const BehaviorPolicy policy = BehaviorPolicy::uniform(1, 1);
  const FrequencyMatrix d = stationary_frequency(mdp, policy);
  EXPECT_DOUBLE_EQ(d.at(0, 0), 1.0);
}

TEST(Chain, AppendixCOptimalPolicy) {
  auto [mdp, policy] = build_appendix_c();
  const BehaviorPolicy pi_star = BehaviorPolicy::deterministic(2, 2, {0, 1});
  const FrequencyMatrix d = stationary_frequency(mdp, pi_star);
  // state marginals
  EXPECT_NEAR(d.at(0, 0) + d.at(0, 1), 5.0 / 13.0, 1e-10);
  EXPECT_NEAR(d.at(1, 0) + d.at(1, 1), 8.0 / 13.0, 1e-10);
  // off-policy pairs are never visited
  EXPECT_NEAR(d.at(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(d.at(1, 0), 0.0, 1e-12);
}

TEST(Chain, AppendixCBehaviorPolicy) {
  auto [mdp, policy] = build_appendix_c();
  const FrequencyMatrix d = stationary_frequency(mdp, policy);
  // State marginals solve the 2x2 stationarity system for p(s1|s1) = 0.68.
  EXPECT_NEAR(d.at(0, 0) + d.at(0, 1), 25.0 / 41.0, 1e-12);
  EXPECT_NEAR(d.at(1, 0) + d.at(1, 1), 16.0 / 41.0, 1e-12);
  EXPECT_NEAR(d.min_entry(), 16.0 / 205.0, 1e-12);
  double total = 0.0;
  for (double v : d.diag) total += v;
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Chain, MatchesPowerIterationOracle) {
  std::mt19937_64 gen(12);
  for (int t = 0; t < 50; ++t) {
    const TabularMdp mdp = testutil::random_mdp(gen, 2 + t % 4, 1 + t % 3);
    const BehaviorPolicy policy = BehaviorPolicy::uniform(mdp.n_states, mdp.n_actions);
    const auto chain = state_action_chain(mdp, policy);
    const auto direct = stationary_distribution(chain, mdp.n_pairs());
    const auto oracle = testutil::power_iteration_stationary(chain, mdp.n_pairs());
    for (int i = 0; i < mdp.n_pairs(); ++i) EXPECT_NEAR(direct[i], oracle[i], 1e-9);
  }
}

TEST(Chain, ReducibleAndPeriodicRejected) {
  // Two absorbing states: reducible.
  const TabularMdp absorbing = TabularMdp::make(2, 1, {1.0, 0.0, 0.0, 1.0}, {0.0, 0.0});
  EXPECT_THROW(check_ergodic(absorbing, BehaviorPolicy::uniform(2, 1)), ModelError);

  // Deterministic two-cycle: irreducible but periodic.
  const TabularMdp cycle = TabularMdp::make(2, 1, {0.0, 1.0, 1.0, 0.0}, {0.0, 0.0});
  EXPECT_THROW(check_ergodic(cycle, BehaviorPolicy::uniform(2, 1)), ModelError);

  try {
    check_ergodic(cycle, BehaviorPolicy::uniform(2, 1));
    FAIL() << "expected ModelError";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("period"), std::string::npos);
  }
}

TEST(AsyncBellman, UnitWeightsRecoverBellman) {
  auto [mdp, policy] = build_appendix_c();
  std::mt19937_64 gen(13);
  const QTable q = testutil::random_q(gen, mdp);
  const FrequencyMatrix ones{2, 2, {1.0, 1.0, 1.0, 1.0}};
  EXPECT_LT(sup_dist(async_bellman(mdp, q, ones).values, bellman(mdp, q).values), 1e-12);
}

TEST(AsyncBellman, UniformWeightsScaleTheResidual) {
  auto [mdp, policy] = build_appendix_c();
  std::mt19937_64 gen(14);
  for (int t = 0; t < 50; ++t) {
    const QTable q = testutil::random_q(gen, mdp);
    const FrequencyMatrix d = FrequencyMatrix::uniform(2, 2);
    const QTable lhs = async_bellman(mdp, q, d);
    const QTable hq = bellman(mdp, q);
    for (int i = 0; i < q.size(); ++i) {
      EXPECT_NEAR(lhs.values[i] - q.values[i], (hq.values[i] - q.values[i]) / 4.0, 1e-12);
    }
  }
}

TEST(AsyncBellman, BehaviorFixedPointResidual) {
  auto [mdp, policy] = build_appendix_c();
  const FrequencyMatrix d = stationary_frequency(mdp, policy);
  const SolveReport bar = solve_async_bellman(mdp, d, 1e-12);
  EXPECT_LT(span_dist(async_bellman(mdp, bar.fixed_point, d).values, bar.fixed_point.values),
            1e-9);
}

TEST(AsyncBellman, NonpositiveWeightRejected) {
  auto [mdp, policy] = build_appendix_c();
  const FrequencyMatrix zero{2, 2, {0.5, 0.5, 0.0, 0.5}};
  EXPECT_THROW(async_bellman(mdp, QTable::zeros_like(mdp), zero), std::invalid_argument);
}

TEST(SampledUpdate, ChangesAtMostOneEntry) {
  std::mt19937_64 gen(15);
  for (int t = 0; t < 100; ++t) {
    const TabularMdp mdp = testutil::random_mdp(gen, 2 + t % 3, 1 + t % 3);
    const QTable q = testutil::random_q(gen, mdp);
    const TransitionTriple y{static_cast<int>(gen() % mdp.n_states),
                             static_cast<int>(gen() % mdp.n_actions),
                             static_cast<int>(gen() % mdp.n_states)};
    const QTable f = sampled_update(mdp, q, y);
    int changed = 0;
    for (int i = 0; i < q.size(); ++i) changed += f.values[i] != q.values[i];
    EXPECT_LE(changed, 1);
    if (changed == 1) {
      EXPECT_NE(f(y.s0, y.a0), q(y.s0, y.a0));
    }
  }
}

TEST(SampledUpdate, ZeroTemporalDifferenceIsIdentity) {
  // R(s0,a0) + max_a Q(s1,a) == Q(s0,a0) leaves the table unchanged.
  const TabularMdp mdp = TabularMdp::make(2, 1, {0.5, 0.5, 0.5, 0.5}, {0.5, 0.5});
  QTable q(2, 1);
  q(0, 0) = 2.0;
  q(1, 0) = 1.5;
  const QTable f = sampled_update(mdp, q, TransitionTriple{0, 0, 1});
  EXPECT_EQ(f.values, q.values);
}

TEST(SampledUpdate, InvalidIndicesRejected) {
  auto [mdp, policy] = build_appendix_c();
  const QTable q = QTable::zeros_like(mdp);
  EXPECT_THROW(sampled_update(mdp, q, TransitionTriple{2, 0, 0}), std::invalid_argument);
  EXPECT_THROW(sampled_update(mdp, q, TransitionTriple{0, -1, 0}), std::invalid_argument);
}

TEST(SampledUpdate, EnumeratedMeanEqualsBellman) {
  auto [mdp, policy] = build_appendix_c();
  const FrequencyMatrix d = stationary_frequency(mdp, policy);
  std::mt19937_64 gen(16);
  for (int t = 0; t < 20; ++t) {
    const QTable q = testutil::random_q(gen, mdp);
    QTable mean(2, 2, 0.0);
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < 2; ++a) {
        for (int s2 = 0; s2 < 2; ++s2) {
          const double nu = d.at(s, a) * mdp.p(s, a, s2);
          const QTable f = sampled_update(mdp, q, d, TransitionTriple{s, a, s2});
          for (int i = 0; i < 4; ++i) mean.values[i] += nu * f.values[i];
        }
      }
    }
    EXPECT_LT(sup_dist(mean.values, bellman(mdp, q).values), 1e-10);
  }
}

TEST(MdpIo, BundledAssetMatchesBuiltModel) {
  const std::filesystem::path asset = std::filesystem::path(AVGQ_SOURCE_DIR) / "assets" /
                                      "appendix_c.json";
  const TabularMdp loaded = load_mdp_json(asset.string());
  auto [built, policy] = build_appendix_c();
  EXPECT_EQ(loaded.n_states, built.n_states);
  EXPECT_EQ(loaded.n_actions, built.n_actions);
  EXPECT_EQ(loaded.transition, built.transition);
  EXPECT_EQ(loaded.reward, built.reward);
  EXPECT_EQ(loaded.name, built.name);
}

TEST(MdpIo, RoundTripAndRejection) {
  std::mt19937_64 gen(17);
  const TabularMdp mdp = testutil::random_mdp(gen, 3, 2);
  const std::string path = (std::filesystem::temp_directory_path() / "avgq_mdp_rt.json").string();
  save_mdp_json(mdp, path);
  const TabularMdp loaded = load_mdp_json(path);
  EXPECT_EQ(loaded.transition, mdp.transition);
  EXPECT_EQ(loaded.reward, mdp.reward);

  EXPECT_THROW(load_mdp_json("/nonexistent/avgq.json"), std::invalid_argument);
}

}  // namespace
