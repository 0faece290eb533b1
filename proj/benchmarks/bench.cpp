#include <benchmark/benchmark.h>

#include <random>

#include "avgq/chain.hpp"
#include "avgq/experiment.hpp"
#include "avgq/learner.hpp"
#include "avgq/operators.hpp"
#include "avgq/solve.hpp"
#include "avgq/span.hpp"

namespace {

using namespace avgq;

std::vector<double> random_vector(int d, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  std::vector<double> x(static_cast<size_t>(d));
  for (double& v : x) v = unif(gen);
  return x;
}

void BM_Span(benchmark::State& state) {
  const auto x = random_vector(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(span(x));
  }
}
BENCHMARK(BM_Span)->Range(8, 4096);

void BM_Bellman(benchmark::State& state) {
  auto [mdp, policy] = build_appendix_c();
  QTable q(2, 2);
  q.values = random_vector(4, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bellman(mdp, q));
  }
}
BENCHMARK(BM_Bellman);

void BM_SolveBellman(benchmark::State& state) {
  auto [mdp, policy] = build_appendix_c();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_bellman(mdp, 1e-12));
  }
}
BENCHMARK(BM_SolveBellman)->Unit(benchmark::kMicrosecond);

void BM_StationaryFrequency(benchmark::State& state) {
  auto [mdp, policy] = build_appendix_c();
  for (auto _ : state) {
    benchmark::DoNotOptimize(stationary_frequency(mdp, policy));
  }
}
BENCHMARK(BM_StationaryFrequency)->Unit(benchmark::kMicrosecond);

void BM_LearnerSteps(benchmark::State& state) {
  auto [mdp, policy] = build_appendix_c();
  LearnerConfig lc;
  lc.variant = state.range(0) == 0 ? Variant::kAdaptiveSet : Variant::kAdaptiveCentered;
  Learner learner(mdp, policy, lc, RngStream(42));
  for (auto _ : state) {
    benchmark::DoNotOptimize(learner.step());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LearnerSteps)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
