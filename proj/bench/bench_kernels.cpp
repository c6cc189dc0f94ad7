// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <map>

#include "novak/generators.hpp"
#include "novak/hypergraph.hpp"
#include "novak/pipeline.hpp"

using namespace novak;

namespace {

const CyclicDesign& sts(std::uint32_t v) {
  static std::map<std::uint32_t, CyclicDesign> cache;
  auto it = cache.find(v);
  if (it == cache.end()) it = cache.emplace(v, cdf_design_roundtrip(construct_sts_cdf(v, 1))).first;
  return it->second;
}

void nibble(benchmark::State& state, Execution exec) {
  const auto aux = build_auxiliary_hypergraph(sts(static_cast<std::uint32_t>(state.range(0))));
  const auto colours = 2 * aux.graph.max_degree();
  for (auto _ : state) {
    auto c = nibble_edge_colouring(aux.graph, colours, 1, {}, exec);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * aux.graph.edge_count());
}

void bad_blocks(benchmark::State& state, Execution exec) {
  const auto& d = sts(static_cast<std::uint32_t>(state.range(0)));
  PartialParallelClass p(d);
  for (std::size_t i = 0; i < d.orbit_count(); ++i)
    for (Residue t = 0; t < d.v().value() && p.count(i) < 2; t += 7)
      if (p.fits(d.block(i, t))) p.insert(i, t);
  for (auto _ : state) benchmark::DoNotOptimize(count_bad_blocks(p, exec));
}

void enumerate(benchmark::State& state, bool parallel) {
  const Modulus v(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    std::size_t n = 0;
    auto sink = [&](const DifferenceFamily&) { return ++n, true; };
    if (parallel) enumerate_cdfs_parallel(v, 3, 1, {}, sink);
    else enumerate_cdfs(v, 3, 1, {}, sink);
    benchmark::DoNotOptimize(n);
  }
}

}  // namespace

BENCHMARK_CAPTURE(nibble, serial, Execution::serial)->Arg(301)->Arg(1201)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(nibble, openmp, Execution::parallel)->Arg(301)->Arg(1201)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bad_blocks, serial, Execution::serial)->Arg(601)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bad_blocks, openmp, Execution::parallel)->Arg(601)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(enumerate, serial, false)->Arg(31)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(enumerate, openmp, true)->Arg(31)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
