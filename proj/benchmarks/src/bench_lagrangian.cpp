#include <benchmark/benchmark.h>

#include "pmcf/lagrangian.hpp"

using namespace pmcf;

namespace {

void BM_CurveGeometry(benchmark::State& state) {
  const ParametricState s = sinusoid_curve(SpacetimeChart::robertson_walker(1, ScaleFactor::exp_decay()), 0.1,
                                           static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(curve_geometry(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CurveGeometry)->RangeMultiplier(4)->Range(64, 4096);

void BM_IdentityResidual(benchmark::State& state) {
  const auto id = static_cast<Identity>(state.range(0));
  state.SetLabel(std::string(to_string(id)));
  for (auto _ : state)
    benchmark::DoNotOptimize(identity_residual(id, Fixture::RobertsonWalkerSinusoid, 0.01, 256));
}
BENCHMARK(BM_IdentityResidual)->DenseRange(0, 6);

}  // namespace
