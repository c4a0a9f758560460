#include <benchmark/benchmark.h>

#include "hnfv/mdra.hpp"
#include "hnfv/mva.hpp"
#include "hnfv/oracle.hpp"
#include "hnfv/scenarios.hpp"

namespace {

using namespace hnfv;

const Scenario& small_preset() {
  static const Scenario s = [] {
    ScenarioSpec spec;
    spec.seed = 1;
    spec.rate_mean_mbps = 100;
    return generate(spec);
  }();
  return s;
}

void BM_MdraRoute(benchmark::State& state) {
  const Scenario& s = small_preset();
  const FlowSpec& f = s.flows.front();
  const auto params = WeightParams::defaults_for(s.graph);
  Router router(s.graph, s.initial, compute_flow_weights(s.graph, s.initial, f, params));
  for (auto _ : state) {
    benchmark::DoNotOptimize(router.try_route(f.source, f.destination, f.rate));
  }
}
BENCHMARK(BM_MdraRoute);

void BM_MvaSmallPreset(benchmark::State& state) {
  const Scenario& s = small_preset();
  const auto params = WeightParams::defaults_for(s.graph);
  const BeamConfig beam{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_all(s.graph, s.catalog, s.flows, beam, params, &s.initial));
  }
}
BENCHMARK(BM_MvaSmallPreset)->Arg(1)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_OracleStructure(benchmark::State& state) {
  const Scenario s = generate(structure_preset(static_cast<int>(state.range(0)), 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exhaustive_solve(s.graph, s.catalog, s.flows, {}, &s.initial));
  }
}
BENCHMARK(BM_OracleStructure)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
