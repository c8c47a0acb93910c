#include <cmath>

#include <benchmark/benchmark.h>

#include "pmcf/graph_geometry.hpp"

using namespace pmcf;

namespace {

GraphState crossing_graph(int n, int nodes) {
  const Grid grid = Grid::uniform(n, nodes, kTwoPi);
  std::vector<double> u(grid.node_count());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Vec2 x = grid.coordinates(i);
    u[i] = 1.0 + 0.05 * std::sin(x[0]) + (n > 1 ? 0.05 * std::cos(x[1]) : 0.0);
  }
  return GraphState(0.0, std::move(u), grid, SpacetimeChart::robertson_walker(n, ScaleFactor::crossing(n)));
}

void BM_AssembleGeometry1D(benchmark::State& state) {
  const GraphState s = crossing_graph(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_geometry(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AssembleGeometry1D)->RangeMultiplier(4)->Range(64, 4096);

void BM_AssembleGeometry2D(benchmark::State& state) {
  const GraphState s = crossing_graph(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_geometry(s));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_AssembleGeometry2D)->RangeMultiplier(2)->Range(16, 128);

}  // namespace
