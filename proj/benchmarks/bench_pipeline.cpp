#include <benchmark/benchmark.h>

#include "noongen/search.hpp"

using namespace noongen;

namespace {

ScenarioConfig unit_cfg(int mode_count) {
  std::vector<int> modes;
  for (int m = 1; m <= mode_count; ++m) modes.push_back(m);
  return unit_override_config(modes);
}

void BM_Beamsplitter(benchmark::State& state) {
  const ScenarioConfig cfg = unit_cfg(int(state.range(0)));
  const auto [t1, t2] = build_tables(cfg);
  const FockState psi2 =
      apply_spdc(apply_spdc(FockState::vacuum(), t1, Path::A, Path::B), t2, Path::A,
                 Path::C);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_beamsplitter(psi2, Path::A, Path::D));
  }
}
BENCHMARK(BM_Beamsplitter)->Arg(2)->Arg(3)->Arg(5);

void BM_RunPipeline(benchmark::State& state) {
  const ScenarioConfig cfg = unit_cfg(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pipeline(cfg));
  }
}
BENCHMARK(BM_RunPipeline)->Arg(1)->Arg(2)->Arg(3);

void BM_HeraldObjective(benchmark::State& state) {
  const ScenarioConfig cfg = unit_cfg(2);
  const PipelinePrefix prefix = build_prefix(cfg);
  const FockState target = run_named_scenario("two-mode-noon").stages.psi_f;
  SearchSpace space;
  space.modes_D = {-1, -2};
  space.modes_A = {-1, -2};
  const std::vector<double> params = {1.0, 0.3, 0.8, 2.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(objective(params, space, prefix, target));
  }
}
BENCHMARK(BM_HeraldObjective);

void BM_OptimizeTwoMode(benchmark::State& state) {
  const ScenarioConfig cfg = unit_cfg(2);
  const FockState target = run_named_scenario("two-mode-noon").stages.psi_f;
  SearchSpace space;
  space.modes_D = {-1, -2};
  space.modes_A = {-1, -2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize(cfg, target, space, 500, 1));
  }
}
BENCHMARK(BM_OptimizeTwoMode);

}  // namespace

BENCHMARK_MAIN();
