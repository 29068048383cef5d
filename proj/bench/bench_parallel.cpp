// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "geoent/oracle.hpp"
#include "geoent/sweep.hpp"

using namespace geoent;

static void BM_SweepSerial(benchmark::State& state) {
  const double gamma = kPi / 3;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(gamma, n));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SweepSerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_SweepParallel(benchmark::State& state) {
  const double gamma = kPi / 3;
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(gamma, n));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SweepParallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_SweepAnalyticSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(kPi / 2, n));
}
BENCHMARK(BM_SweepAnalyticSerial)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_SweepAnalyticParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(kPi / 2, n));
}
BENCHMARK(BM_SweepAnalyticParallel)->Arg(200)->Unit(benchmark::kMillisecond);

static GeneralThreeQubitState bench_state() {
  return GeneralThreeQubitState(state_vector(from_params(0.6, 0.35, 0.4, 1.0)).amp);
}

static void BM_OracleSerial(benchmark::State& state) {
  const auto psi = bench_state();
  const int restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(alternating_maximize_serial(psi, restarts));
}
BENCHMARK(BM_OracleSerial)->Arg(50)->Arg(400);

static void BM_OracleParallel(benchmark::State& state) {
  const auto psi = bench_state();
  const int restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(alternating_maximize(psi, restarts));
}
BENCHMARK(BM_OracleParallel)->Arg(50)->Arg(400);

BENCHMARK_MAIN();
