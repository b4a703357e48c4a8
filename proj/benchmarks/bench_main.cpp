#include <benchmark/benchmark.h>

#include <numeric>

#include "eulerlab/chain.hpp"
#include "eulerlab/explore.hpp"
#include "eulerlab/hitting.hpp"
#include "eulerlab/mixing.hpp"
#include "eulerlab/random.hpp"
#include "eulerlab/sensitivity.hpp"
#include "eulerlab/spectral.hpp"

using namespace eulerlab;

static void BM_Evolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  LazyChain c = LazyChain::build(gen_random_eulerian(n, 4 * n, 1), 0.5);
  for (auto _ : state) {
    Distribution mu = c.evolve(point_mass(n, 0), 1000);
    benchmark::DoNotOptimize(mu.data());
  }
  state.SetItemsProcessed(state.iterations() * 1000 * static_cast<std::int64_t>(c.nonzeros()));
}
BENCHMARK(BM_Evolve)->Arg(64)->Arg(512)->Arg(4096);

static void BM_GadgetThreshold(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Gadget g = gen_two_cycle_gadget({n, static_cast<double>(golden_conjugate())});
  LazyChain c = LazyChain::build(g.graph, g.holding);
  for (auto _ : state) {
    auto r = threshold_time(c, Metric::tv, 0.25);
    benchmark::DoNotOptimize(r.time);
  }
}
BENCHMARK(BM_GadgetThreshold)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_GoodVertices(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CycleLabelling lab;
  lab.order.resize(n);
  std::iota(lab.order.begin(), lab.order.end(), VertexId{0});
  lab.position.resize(n);
  std::iota(lab.position.begin(), lab.position.end(), std::size_t{0});
  Rng rng(5);
  std::vector<char> visited(n);
  for (auto& v : visited) v = rng.uniform() < 0.3;
  for (auto _ : state) {
    auto u = good_vertices(lab, visited);
    benchmark::DoNotOptimize(u.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GoodVertices)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

static void BM_SetSpectrum(benchmark::State& state) {
  LazyChain c = LazyChain::build(gen_random_eulerian(12, 36, 2), 0.5);
  SetSpectrumSolver solver(c);
  VertexSet s{0, 2, 3, 5, 7, 8};
  for (auto _ : state) {
    auto r = solver.solve(s);
    benchmark::DoNotOptimize(r.lambda);
  }
}
BENCHMARK(BM_SetSpectrum);

static void BM_SpectralProfile(benchmark::State& state) {
  LazyChain c = LazyChain::build(gen_random_eulerian(static_cast<std::size_t>(state.range(0)), 30, 4), 0.5);
  for (auto _ : state) {
    auto p = spectral_profile(c);
    benchmark::DoNotOptimize(p.breakpoints.data());
  }
}
BENCHMARK(BM_SpectralProfile)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_HittingTimes(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  LazyChain c = LazyChain::build(gen_random_eulerian(n, 3 * n, 3), 0.5);
  for (auto _ : state) {
    auto h = hitting_times(c);
    benchmark::DoNotOptimize(h.data());
  }
}
BENCHMARK(BM_HittingTimes)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
