#include <benchmark/benchmark.h>

#include "bridgelab/contrast.hpp"
#include "bridgelab/solver.hpp"

using namespace bridgelab;

static void BM_Minimize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p0 = static_cast<std::size_t>(state.range(1));
  DesignSpec spec;
  spec.kind = DesignKind::bounded_random_frozen;
  spec.p = p0 + 2;
  Vector rho(2);
  rho << 1.0, -0.5;
  const TrueParameter truth(p0, rho);
  const Contrast c(simulate_dataset(generate_design(spec, n, 1), truth, {NoiseFamily::gaussian, 1.0}, 2),
                   PenaltySpec::bridge(0.5, {1.0, 0.6}));
  for (auto _ : state) benchmark::DoNotOptimize(minimize(c));
}
BENCHMARK(BM_Minimize)->Args({100, 1})->Args({1000, 1})->Args({1000, 4})->Args({10000, 2});
