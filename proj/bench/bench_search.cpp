// Serial reference against the OpenMP search, and the two step kernels.
#include <benchmark/benchmark.h>

#include "trine/ac23.hpp"

using namespace trine;

static SearchConfig bench_config(std::size_t lmax) {
  SearchConfig cfg;
  cfg.lmax = lmax;
  cfg.exhaustive_cutoff = lmax;
  return cfg;
}

static void BM_ClassifySerial(benchmark::State& state) {
  const SearchConfig cfg = bench_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classify_mask_serial(Mask(3, 5), cfg));
}
BENCHMARK(BM_ClassifySerial)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);

static void BM_ClassifyParallel(benchmark::State& state) {
  const SearchConfig cfg = bench_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classify_mask(Mask(3, 5), cfg));
}
BENCHMARK(BM_ClassifyParallel)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);

static void BM_StepGeneric(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const MixedGraph g = build_graph(Mask(3, 5), L).graph;
  Coloring c = transliterate(Coloring::parse(start_string(0x5a5a5a5a5aULL & ((1ULL << L) - 1), L)));
  for (auto _ : state) {
    c = step(g, c);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_StepGeneric)->Arg(16)->Arg(48);

static void BM_StepPacked(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const PackedAutomaton aut = build_packed(Mask(3, 5), L);
  PackedState s{0, 0x5a5a5a5a5aULL & aut.full_mask()};
  for (auto _ : state) {
    s = aut.step(s);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_StepPacked)->Arg(16)->Arg(48);

BENCHMARK_MAIN();
