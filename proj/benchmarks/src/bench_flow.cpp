#include <cmath>

#include <benchmark/benchmark.h>

#include "pmcf/flow.hpp"

using namespace pmcf;

namespace {

GraphState perturbed_crossing(int n, int nodes) {
  const Grid grid = Grid::uniform(n, nodes, kTwoPi);
  std::vector<double> u(grid.node_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + 0.05 * std::sin(grid.coordinates(i)[0]);
  return GraphState(0.0, std::move(u), grid, SpacetimeChart::robertson_walker(n, ScaleFactor::crossing(n)));
}

void BM_Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GraphState s = perturbed_crossing(n, static_cast<int>(state.range(1)));
  FlowConfig c;
  c.p = 0.5;
  c.tau = 0.5;
  c.integrator = state.range(2) ? Integrator::RK2 : Integrator::Euler;
  const double dt = stable_dt(s, c);
  for (auto _ : state) benchmark::DoNotOptimize(step(s, dt, c));
}
BENCHMARK(BM_Step)->ArgNames({"n", "N", "rk2"})->ArgsProduct({{1}, {64, 256, 1024}, {0, 1}})->Args({2, 64, 1});

void BM_RunToStationary(benchmark::State& state) {
  const GraphState s = perturbed_crossing(1, static_cast<int>(state.range(0)));
  FlowConfig c;
  c.tau = 0.3;
  c.t_max = 60.0;
  c.integrator = Integrator::RK2;
  c.monitor_stride = 100;
  for (auto _ : state) benchmark::DoNotOptimize(run(s, c).steps);
}
BENCHMARK(BM_RunToStationary)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
