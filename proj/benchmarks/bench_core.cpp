#include <benchmark/benchmark.h>

#include <random>

#include "triqubit/classifier.hpp"
#include "triqubit/entropy.hpp"
#include "triqubit/optimizer.hpp"

using namespace triqubit;

static PureState random_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Amplitudes a(std::size_t{1} << n);
  for (auto& x : a) x = Complex(g(rng), g(rng));
  return PureState(n, a);
}

static void BM_Measure(benchmark::State& state) {
  const PureState s = random_state(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(measure(s).value);
}
BENCHMARK(BM_Measure)->Arg(3)->Arg(6)->Arg(10);

static void BM_GradientIII4(benchmark::State& state) {
  const auto c = TermCombination::parse("W2,W3,W4,W4bar");
  const ParamPoint p{{0.4, 0.5, 0.6, 0.48}, {0.3, 1.1, 2.0}};
  for (auto _ : state) benchmark::DoNotOptimize(gradient(c, p));
}
BENCHMARK(BM_GradientIII4);

static void BM_MaximizeIII4(benchmark::State& state) {
  const auto c = TermCombination::parse("W2,W3,W4,W4bar");
  OptConfig cfg;
  cfg.num_starts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maximize(c, cfg).clusters.size());
}
BENCHMARK(BM_MaximizeIII4)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_SurveyK4(benchmark::State& state) {
  OptConfig cfg;
  cfg.num_starts = 50;
  for (auto _ : state) benchmark::DoNotOptimize(survey(4, cfg).total());
}
BENCHMARK(BM_SurveyK4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
