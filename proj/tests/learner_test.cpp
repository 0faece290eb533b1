#include "avgq/learner.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "avgq/chain.hpp"
#include "avgq/errors.hpp"
#include "avgq/experiment.hpp"
#include "avgq/solve.hpp"
#include "avgq/span.hpp"
#include "test_util.hpp"

namespace {

using namespace avgq;

TabularMdp single_pair_mdp() {
  return TabularMdp::make(1, 1, {1.0}, {1.0}, "single-pair");
}

LearnerConfig adaptive_config(double alpha = 2.0, double h = 2.0) {
  LearnerConfig lc;
  lc.variant = Variant::kAdaptiveSet;
  lc.alpha = alpha;
  lc.h = h;
  return lc;
}

TEST(LearnerConfig, StepsizeConstraintEnforced) {
  auto [mdp, policy] = build_appendix_c();
  LearnerConfig lc = adaptive_config(3.0, 1.5);  // h <= alpha - 1
  EXPECT_THROW(Learner(mdp, policy, lc, RngStream(1)), std::invalid_argument);
  lc = adaptive_config(-1.0, 2.0);
  EXPECT_THROW(Learner(mdp, policy, lc, RngStream(1)), std::invalid_argument);
  lc = adaptive_config();
  lc.variant = Variant::kDiscounted;
  lc.bound_check = true;
  EXPECT_THROW(Learner(mdp, policy, lc, RngStream(1)), std::invalid_argument);
  lc.bound_check = false;
  lc.gamma = 1.5;
  EXPECT_THROW(Learner(mdp, policy, lc, RngStream(1)), std::invalid_argument);
}

TEST(SampleStep, DeterministicModelGivesTheUniqueTransition) {
  const TabularMdp mdp = TabularMdp::make(2, 1, {0.0, 1.0, 1.0, 0.0}, {0.5, -0.5});
  const BehaviorPolicy policy = BehaviorPolicy::uniform(2, 1);
  RngStream rng(7);
  auto [a, s2, r] = sample_step(mdp, policy, 0, rng);
  EXPECT_EQ(a, 0);
  EXPECT_EQ(s2, 1);
  EXPECT_DOUBLE_EQ(r, 0.5);
}

TEST(SampleStep, AppendixCStateTwoMarginal) {
  auto [mdp, policy] = build_appendix_c();
  RngStream rng(8);
  const int n = 100000;
  int to_s1 = 0;
  for (int i = 0; i < n; ++i) {
    auto [a, s2, r] = sample_step(mdp, policy, 1, rng);
    to_s1 += s2 == 0;
  }
  // p(s1 | s2, .) = 1/2 regardless of the action; 3 sigma band
  const double sigma = std::sqrt(0.25 / n);
  EXPECT_NEAR(static_cast<double>(to_s1) / n, 0.5, 3.0 * sigma);
}

TEST(SampleStep, EmpiricalFrequenciesApproachStationary) {
  auto [mdp, policy] = build_appendix_c();
  const FrequencyMatrix d = stationary_frequency(mdp, policy);
  RngStream rng(9);
  std::vector<double> freq(4, 0.0);
  const long n = 1000000;
  int s = 0;
  for (long i = 0; i < n; ++i) {
    auto [a, s2, r] = sample_step(mdp, policy, s, rng);
    freq[static_cast<size_t>(s) * 2 + a] += 1.0;
    s = s2;
  }
  for (double& v : freq) v /= static_cast<double>(n);
  EXPECT_LT(sup_dist(freq, d.diag), 0.01);
}

TEST(TemporalDifference, KnownValues) {
  auto [mdp, policy] = build_appendix_c();
  const QTable zero = QTable::zeros_like(mdp);
  EXPECT_DOUBLE_EQ(temporal_difference(mdp, zero, {0, 1, 1}), mdp.r(0, 1));

  // On a deterministic chain at a Bellman solution, every TD equals the gain.
  const TabularMdp chain_mdp = TabularMdp::make(2, 1, {0.0, 1.0, 1.0, 0.0}, {0.0, 1.0});
  QTable solution(2, 1);
  solution.values = {0.0, 0.5};  // H(Q) - Q = 0.5 e
  EXPECT_DOUBLE_EQ(temporal_difference(chain_mdp, solution, {0, 0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(temporal_difference(chain_mdp, solution, {1, 0, 0}), 0.5);

  // single pair: delta = 1 for any table value
  QTable q1(1, 1);
  q1.values = {123.0};
  EXPECT_DOUBLE_EQ(temporal_difference(single_pair_mdp(), q1, {0, 0, 0}), 1.0);
}

TEST(TemporalDifference, BoundedBySpan) {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 500; ++t) {
    const TabularMdp mdp = testutil::random_mdp(gen, 2 + t % 3, 1 + t % 3);
    const QTable q = testutil::random_q(gen, mdp);
    const TransitionTriple y{static_cast<int>(gen() % mdp.n_states),
                             static_cast<int>(gen() % mdp.n_actions),
                             static_cast<int>(gen() % mdp.n_states)};
    EXPECT_LE(std::abs(temporal_difference(mdp, q, y)), 1.0 + 2.0 * span(q.values) + 1e-12);
  }
}

TEST(Learner, SinglePairHarmonicPartialSums) {
  const TabularMdp mdp = single_pair_mdp();
  const BehaviorPolicy policy = BehaviorPolicy::uniform(1, 1);
  LearnerConfig lc = adaptive_config(1.0, 1.0);
  Learner learner(mdp, policy, lc, RngStream(1));
  learner.step();
  EXPECT_DOUBLE_EQ(learner.q().values[0], 0.5);
  learner.step();
  EXPECT_DOUBLE_EQ(learner.q().values[0], 0.5 + 1.0 / 3.0);
  learner.step();
  EXPECT_DOUBLE_EQ(learner.q().values[0], 0.5 + 1.0 / 3.0 + 0.25);
}

TEST(Learner, SinglePairMatchesClosedFormUpTo1e5) {
  const TabularMdp mdp = single_pair_mdp();
  const BehaviorPolicy policy = BehaviorPolicy::uniform(1, 1);
  LearnerConfig lc = adaptive_config(2.0, 2.0);
  lc.bound_check = true;
  Learner learner(mdp, policy, lc, RngStream(2));
  double partial = 0.0;
  for (long k = 1; k <= 100000; ++k) {
    learner.step();
    partial += 2.0 / (static_cast<double>(k) + 2.0);
    ASSERT_NEAR(learner.q().values[0], partial, 1e-12)
        << "diverged from the partial sum at k=" << k;
  }
  // the iterate leaves any fixed threshold (harmonic divergence)
  EXPECT_GT(learner.q().values[0], 20.0);
  // one-dimensional kernel: the span error to any reference is identically 0
  EXPECT_DOUBLE_EQ(span(learner.q().values), 0.0);
}

TEST(Learner, CenteredVariantStaysCentered) {
  auto [mdp, policy] = build_appendix_c();
  LearnerConfig lc = adaptive_config();
  lc.variant = Variant::kAdaptiveCentered;
  Learner learner(mdp, policy, lc, RngStream(3));
  for (int k = 0; k < 5000; ++k) {
    learner.step();
    const auto& q = learner.q().values;
    const double hi = *std::max_element(q.begin(), q.end());
    const double lo = *std::min_element(q.begin(), q.end());
    ASSERT_NEAR(hi + lo, 0.0, 1e-12);
  }
}

TEST(Learner, GenericCenterShiftMatchesCenteredVariant) {
  auto [mdp, policy] = build_appendix_c();
  LearnerConfig centered = adaptive_config();
  centered.variant = Variant::kAdaptiveCentered;
  LearnerConfig generic = adaptive_config();
  generic.variant = Variant::kGeneric;
  generic.kernel_shift = [](const QTable& q) { return -center_offset(q.values); };
  Learner a(mdp, policy, centered, RngStream(4));
  Learner b(mdp, policy, generic, RngStream(4));
  for (int k = 0; k < 2000; ++k) {
    a.step();
    b.step();
  }
  EXPECT_LT(sup_dist(a.q().values, b.q().values), 1e-12);
}

TEST(Learner, KernelShiftKeepsSetVariantDifferences) {
  // The centered and plain iterates differ by a constant vector pathwise.
  auto [mdp, policy] = build_appendix_c();
  LearnerConfig plain = adaptive_config();
  LearnerConfig centered = adaptive_config();
  centered.variant = Variant::kAdaptiveCentered;
  Learner a(mdp, policy, plain, RngStream(5));
  Learner b(mdp, policy, centered, RngStream(5));
  for (int k = 0; k < 2000; ++k) {
    a.step();
    b.step();
    ASSERT_NEAR(span_dist(a.q().values, b.q().values), 0.0, 1e-12);
  }
}

TEST(Learner, StepsizesStayInUnitIntervalAndSpanIncrementBounded) {
  auto [mdp, policy] = build_appendix_c();
  LearnerConfig lc = adaptive_config(2.0, 2.0);
  Learner learner(mdp, policy, lc, RngStream(6));
  double prev_span = span(learner.q().values);
  for (int k = 0; k < 20000; ++k) {
    const StepInfo info = learner.step();
    ASSERT_GT(info.stepsize, 0.0);
    ASSERT_LT(info.stepsize, 1.0);
    const double cur_span = span(learner.q().values);
    // span seminorm of the one-entry update is |stepsize * td| / 2, and the
    // bundled model has |td| <= span(R) * 2 + 2 span(Q) + ... use the direct
    // triangle bound with the realized td.
    ASSERT_LE(cur_span, prev_span + info.stepsize * std::abs(info.td) / 2.0 + 1e-12);
    prev_span = cur_span;
  }
}

TEST(Learner, AdaptiveAndUniversalDifferOnlyThroughTheCounter) {
  auto [mdp, policy] = build_appendix_c();
  LearnerConfig adaptive = adaptive_config(2.0, 2.0);
  LearnerConfig universal = adaptive_config(2.0, 2.0);
  universal.variant = Variant::kUniversal;
  Learner a(mdp, policy, adaptive, RngStream(7));
  Learner u(mdp, policy, universal, RngStream(7));
  std::vector<long> counts(4, 0);
  for (long k = 1; k <= 5000; ++k) {
    const StepInfo ia = a.step();
    const StepInfo iu = u.step();
    // identical trajectory: sampling consumes the same two draws per step
    ASSERT_EQ(ia.state, iu.state);
    ASSERT_EQ(ia.action, iu.action);
    ASSERT_EQ(ia.next_state, iu.next_state);
    counts[static_cast<size_t>(ia.state) * 2 + ia.action] += 1;
    const long n = counts[static_cast<size_t>(ia.state) * 2 + ia.action];
    ASSERT_DOUBLE_EQ(ia.stepsize, 2.0 / (static_cast<double>(n) + 2.0));
    ASSERT_DOUBLE_EQ(iu.stepsize, 2.0 / (static_cast<double>(k) + 2.0));
  }
}

TEST(SampleStep, ConsumesExactlyTwoUniformDraws) {
  auto [mdp, policy] = build_appendix_c();
  RngStream rng(55);
  RngStream shadow = rng;  // value-copied state
  int s = 0;
  for (int k = 0; k < 1000; ++k) {
    auto [a, s2, r] = sample_step(mdp, policy, s, rng);
    shadow.next_uniform();
    shadow.next_uniform();
    ASSERT_EQ(rng.next_u64(), shadow.next_u64()) << "draw count diverged at step " << k;
    // consume the same value on the original stream to stay in lockstep
    s = s2;
  }
}

TEST(VisitState, CountsAndFrequenciesInvariants) {
  auto [mdp, policy] = build_appendix_c();
  LearnerConfig lc = adaptive_config(2.0, 2.0);
  Learner learner(mdp, policy, lc, RngStream(56));
  for (long k = 1; k <= 5000; ++k) {
    learner.step();
    const VisitState& visits = learner.visits();
    long total = 0;
    for (long c : visits.counts) total += c;
    ASSERT_EQ(total, k);  // counters account for every step
    const FrequencyMatrix freq = visits.frequencies(mdp.n_states);
    double sum = 0.0;
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < 2; ++a) {
        const double f = visits.frequency(s, a);
        ASSERT_GT(f, 0.0);
        ASSERT_LE(f, 1.0);
        ASSERT_DOUBLE_EQ(f, freq.at(s, a));
        sum += f;
      }
    }
    const double expected = (static_cast<double>(k) + 2.0 * 4.0) / (static_cast<double>(k) + 2.0);
    ASSERT_NEAR(sum, expected, 1e-12);
  }
}

// On models with rewards in [-1,1] the span can grow by at most the applied
// stepsize per step.
TEST(Learner, OneStepSpanIncrementWithinStepsize) {
  std::mt19937_64 gen(57);
  for (int t = 0; t < 20; ++t) {
    const TabularMdp mdp = testutil::random_mdp(gen, 2 + t % 3, 1 + t % 3);
    const BehaviorPolicy policy = BehaviorPolicy::uniform(mdp.n_states, mdp.n_actions);
    LearnerConfig lc = adaptive_config(2.0, 2.0);
    Learner learner(mdp, policy, lc, RngStream(1000 + t));
    double prev = span(learner.q().values);
    for (int k = 0; k < 2000; ++k) {
      const StepInfo info = learner.step();
      const double cur = span(learner.q().values);
      ASSERT_LE(cur, prev + info.stepsize + 1e-12);
      prev = cur;
    }
  }
}

TEST(Learner, DeterministicGivenSeed) {
  auto [mdp, policy] = build_appendix_c();
  LearnerConfig lc = adaptive_config();
  Learner a(mdp, policy, lc, RngStream(mix_seed(42, 0)));
  Learner b(mdp, policy, lc, RngStream(mix_seed(42, 0)));
  for (int k = 0; k < 10000; ++k) {
    a.step();
    b.step();
  }
  EXPECT_EQ(a.q().values, b.q().values);

  Learner c(mdp, policy, lc, RngStream(mix_seed(42, 1)));
  for (int k = 0; k < 10000; ++k) c.step();
  EXPECT_NE(a.q().values, c.q().values);
}

TEST(LogGrowthBound, FormulaValues) {
  EXPECT_DOUBLE_EQ(log_growth_bound(1, 2.0, 2.0, 4), 0.0);
  EXPECT_NEAR(log_growth_bound(5, 2.0, 1.0, 4), 8.0 * std::log(2.0), 1e-12);
  // nondecreasing in k
  double prev = 0.0;
  for (long k = 1; k <= 1000; ++k) {
    const double b = log_growth_bound(k, 2.0, 2.0, 4);
    ASSERT_GE(b, prev - 1e-15);
    prev = b;
  }
  EXPECT_THROW(log_growth_bound(0, 2.0, 2.0, 4), std::invalid_argument);
}

TEST(Learner, GrowthBoundHoldsOnline) {
  auto [mdp, policy] = build_appendix_c();
  for (Variant variant :
       {Variant::kAdaptiveSet, Variant::kAdaptiveCentered, Variant::kGeneric}) {
    LearnerConfig lc = adaptive_config();
    lc.variant = variant;
    if (variant == Variant::kGeneric) {
      lc.kernel_shift = [](const QTable& q) { return -center_offset(q.values); };
    }
    lc.bound_check = true;
    Learner learner(mdp, policy, lc, RngStream(8));
    for (int k = 0; k < 50000; ++k) {
      ASSERT_NO_THROW(learner.step());
      ASSERT_LE(span(learner.q().values), learner.current_growth_bound() + 1e-9);
    }
  }
}

TEST(Learner, BoundViolationCarriesContext) {
  // All-positive rewards at the validation edge outrun the envelope, which
  // is calibrated to reward ranges spanning zero: a self-loop with R = (3,1)
  // pushes span(Q) past b_k within a few visits of the first action.
  const TabularMdp mdp = TabularMdp::make(1, 2, {1.0, 1.0}, {3.0, 1.0});
  const BehaviorPolicy policy = BehaviorPolicy::make(1, 2, {0.999, 0.001});
  LearnerConfig lc = adaptive_config();
  lc.bound_check = true;
  Learner learner(mdp, policy, lc, RngStream(9));
  try {
    for (int k = 0; k < 1000; ++k) learner.step();
    FAIL() << "expected BoundViolationError";
  } catch (const BoundViolationError& e) {
    EXPECT_GT(e.step, 0);
    EXPECT_GT(e.span_value, e.bound);
    EXPECT_NE(std::string(e.what()).find("growth bound"), std::string::npos);
  }
}

TEST(Learner, DiscountedVariantTracksDiscountedTarget) {
  auto [mdp, policy] = build_appendix_c();
  const QTable qg = discounted_value_iteration(mdp, 0.8, 1e-12);
  LearnerConfig lc = adaptive_config(20.0, 20.0);
  lc.variant = Variant::kDiscounted;
  lc.gamma = 0.8;
  lc.schedule = StepSchedule::kAdaptive;
  Learner learner(mdp, policy, lc, RngStream(10));
  for (int k = 0; k < 200000; ++k) learner.step();
  EXPECT_LT(sup_dist(learner.q().values, qg.values), 0.05 * sup_norm(qg.values));
}

}  // namespace
