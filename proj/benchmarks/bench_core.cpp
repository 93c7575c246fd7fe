#include <benchmark/benchmark.h>

#include "archam/arc_flow.hpp"
#include "archam/free_energy.hpp"
#include "archam/pendulum.hpp"
#include "archam/presets.hpp"

namespace {

using namespace archam;

void BM_GibbsPosterior(benchmark::State& bench) {
  const GridPtr grid = build_uniform_grid(-10.0, 10.0, bench.range(0));
  const State s = presets::normal_location_state(grid);
  for (auto _ : bench) {
    benchmark::DoNotOptimize(gibbs_posterior(s.f(), s.p()));
  }
}
BENCHMARK(BM_GibbsPosterior)->Arg(200)->Arg(2000);

void BM_MinimumFreeEnergy(benchmark::State& bench) {
  const GridPtr grid = build_uniform_grid(-10.0, 10.0, bench.range(0));
  const State s = presets::normal_location_state(grid);
  for (auto _ : bench) {
    benchmark::DoNotOptimize(minimum_free_energy(s.f(), s.p()));
  }
}
BENCHMARK(BM_MinimumFreeEnergy)->Arg(200)->Arg(2000);

void BM_EulerStep(benchmark::State& bench) {
  const GridPtr grid = build_uniform_grid(-10.0, 10.0, bench.range(0));
  const State s = presets::normal_location_state(grid);
  for (auto _ : bench) {
    benchmark::DoNotOptimize(euler_step(s, 0.001));
  }
}
BENCHMARK(BM_EulerStep)->Arg(200)->Arg(2000);

void BM_WeightedTv(benchmark::State& bench) {
  const GridPtr grid = build_uniform_grid(-10.0, 10.0, bench.range(0));
  const State a = presets::normal_location_state(grid);
  const State b = presets::cauchy_location_state(grid);
  const WeightFn w(2.0);
  for (auto _ : bench) {
    benchmark::DoNotOptimize(weighted_tv_metric(a.p(), b.p(), w));
  }
}
BENCHMARK(BM_WeightedTv)->Arg(2000);

void BM_FlowHorizon(benchmark::State& bench) {
  const GridPtr grid = build_uniform_grid(-10.0, 10.0, 2000);
  const State s = presets::normal_location_state(grid);
  IntegratorConfig cfg;
  cfg.delta = 0.01;
  cfg.t_max = 1.0;
  cfg.snapshot_times = {};
  cfg.record_energy_every = 10;
  for (auto _ : bench) {
    benchmark::DoNotOptimize(integrate_flow(s, cfg));
  }
}
BENCHMARK(BM_FlowHorizon);

void BM_PendulumHorizon(benchmark::State& bench) {
  IntegratorConfig cfg;
  cfg.delta = 0.001;
  cfg.t_max = 3.0;
  cfg.snapshot_times = {};
  cfg.record_energy_every = 1;
  for (auto _ : bench) {
    benchmark::DoNotOptimize(integrate_pendulum(presets::default_pendulum_state(), cfg));
  }
}
BENCHMARK(BM_PendulumHorizon);

}  // namespace

BENCHMARK_MAIN();
