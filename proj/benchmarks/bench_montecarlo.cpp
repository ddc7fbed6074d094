#include <benchmark/benchmark.h>

#include "bridgelab/montecarlo.hpp"

using namespace bridgelab;

static void BM_Replications(benchmark::State& state) {
  MCConfig cfg;
  Vector rho(1);
  rho << 1.0;
  cfg.truth = TrueParameter(1, rho);
  cfg.design.p = 2;
  cfg.penalty = PenaltySpec::bridge(0.5, {1.0, 0.6});
  cfg.n_grid = {static_cast<std::size_t>(state.range(0))};
  cfg.replications = 100;
  for (auto _ : state) benchmark::DoNotOptimize(run_replications(cfg, 1));
}
BENCHMARK(BM_Replications)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
