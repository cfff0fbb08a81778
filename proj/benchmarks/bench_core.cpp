#include <benchmark/benchmark.h>

#include <random>

#include "pathint/experiments.hpp"
#include "pathint/integration.hpp"
#include "pathint/truncation.hpp"
#include "pathint/variation.hpp"

using namespace pathint;

namespace {

StepPath brownian(std::size_t steps, std::uint64_t seed) {
  PathGenSpec spec;
  spec.steps = steps;
  spec.seed = seed;
  return gen_path(spec);
}

void BM_TruncateSkorohod(benchmark::State& state) {
  const auto x = brownian(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(truncate_skorohod(x, 0.01));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TruncateTvmin(benchmark::State& state) {
  const auto x = brownian(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(truncate_tvmin(x, 0.01));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TruncatedVariation(benchmark::State& state) {
  const auto x = brownian(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(truncated_variation(x, 0.01));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StieltjesLeft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = brownian(n, 4);
  const auto y = brownian(n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(stieltjes_left(y, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BruteVariation(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> t, v;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    t.push_back(static_cast<double>(i));
    v.push_back(u(rng));
  }
  const auto x = StepPath::from_samples(t, v);
  for (auto _ : state) benchmark::DoNotOptimize(brute_tv_c(x, 0.3));
}

}  // namespace

BENCHMARK(BM_TruncateSkorohod)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TruncateTvmin)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TruncatedVariation)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StieltjesLeft)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteVariation)->Arg(64)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
