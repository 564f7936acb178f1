#include <benchmark/benchmark.h>

#include <random>

#include "imra/ordering.hpp"
#include "imra/scaling.hpp"
#include "imra/transform.hpp"

using namespace imra;

namespace {

GridFunction noise(int dim, std::int64_t extent) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  GridFunction g(6, Box::cube(dim, 0, extent - 1));
  for (double& v : g.values()) v = u(rng);
  return g;
}

void BM_AnalyzeLevel(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const GridFunction g = noise(dim, state.range(1));
  const FilterBankPtr b = make_dd_bank(2);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_level(g, *b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_AnalyzeLevel)->Args({1, 1 << 16})->Args({2, 256})->Args({3, 48});

void BM_Roundtrip(benchmark::State& state) {
  const GridFunction g = noise(2, state.range(0));
  const FilterBankPtr b = make_dd_bank(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(decompose(g, 2, b)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_Roundtrip)->Args({256, 1})->Args({256, 3});

void BM_RefineScaling(benchmark::State& state) {
  const FilterBank bank = derive_bank(dd_scaling_filter(4), 4);
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(refine_scaling(bank, r));
}
BENCHMARK(BM_RefineScaling)->Arg(8)->Arg(14);

void BM_RefineScalingExact(benchmark::State& state) {
  const FilterBank bank = derive_bank(dd_scaling_filter(4), 4);
  for (auto _ : state) benchmark::DoNotOptimize(refine_scaling_exact(bank, 8));
}
BENCHMARK(BM_RefineScalingExact);

void BM_CubeOrdering(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cube_ordering_prefix(dim, 100000));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_CubeOrdering)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
