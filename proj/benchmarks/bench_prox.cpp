#include <benchmark/benchmark.h>

#include "bridgelab/penalty.hpp"

using namespace bridgelab;

static void BM_BridgeProx(benchmark::State& state) {
  const double gamma = static_cast<double>(state.range(0)) / 100.0;
  const ScalarPenalty pen = ScalarPenalty::bridge(1.0, gamma);
  double b = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scalar_prox(pen, 1.0, b));
    b = b > 3.0 ? -3.0 : b + 0.013;
  }
}
BENCHMARK(BM_BridgeProx)->Arg(25)->Arg(50)->Arg(100)->Arg(150)->Arg(200);

static void BM_ScadProx(benchmark::State& state) {
  const PenaltySpec pen = PenaltySpec::scad(3.7, {0.5, -0.25});
  double b = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scalar_prox(pen, 400, 400.0, b));
    b = b > 3.0 ? -3.0 : b + 0.013;
  }
}
BENCHMARK(BM_ScadProx);
