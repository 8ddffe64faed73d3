#include <benchmark/benchmark.h>

#include "noongen/lg.hpp"

using namespace noongen;

namespace {

PumpSpec mes3d_pump() {
  const double s = std::sqrt(2.5);
  return PumpSpec::make({{LgMode{-2, 0, 1.0}, Cplx{s, 0.0}},
                         {LgMode{0, 0, 1.0}, Cplx{1.0, 0.0}},
                         {LgMode{2, 0, 1.0}, Cplx{s, 0.0}}});
}

void BM_EvalLg(benchmark::State& state) {
  const LgMode mode{3, 2, 1.0};
  double rho = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_lg(mode, rho, 0.4));
    rho = rho < 4.0 ? rho + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_EvalLg);

void BM_OverlapB(benchmark::State& state) {
  const QuadratureSpec quad;
  const LgMode pump{2, 0, 1.0}, signal{1, 0, 1.0}, idler{1, 0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(overlap_B(pump, signal, idler, quad));
  }
}
BENCHMARK(BM_OverlapB);

void BM_CoincidenceTable(benchmark::State& state) {
  const PumpSpec pump = mes3d_pump();
  const QuadratureSpec quad;
  const int l_max = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        coincidence_table(pump, l_max, 0, Waists{1.0, 1.0, 1.0}, quad));
  }
}
BENCHMARK(BM_CoincidenceTable)->Arg(2)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
