// Serial reference against OpenMP kernels. Run with --benchmark_filter to pick
// a kernel; OMP_NUM_THREADS sets the parallel width.

#include <benchmark/benchmark.h>

#include "cpat/geometry.hpp"
#include "cpat/painleve.hpp"
#include "cpat/pattern.hpp"

using namespace cpat;

namespace {

PatternConfig bench_config(int size, int bits) {
  const PrecisionContext ctx(bits);
  return PatternConfig::make(PatternMode::zgamma, Real(0.5, ctx), Real::pi(ctx) / 3, size, ctx);
}

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_propagate_interior(benchmark::State& state) {
  const PatternConfig cfg = bench_config(static_cast<int>(state.range(1)), 212);
  const Exec exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_interior(cfg, exec));
  state.SetLabel(exec == Exec::serial ? "serial" : "parallel");
}

void BM_survival_scan(benchmark::State& state) {
  const PrecisionContext ctx(212);
  const PainleveParams params = PainleveParams::make(Real(0.5, ctx), Real::pi(ctx) / 2, 0);
  const Exec exec = exec_of(state);
  const Real lo(0.3, ctx), hi(0.5, ctx);
  for (auto _ : state) {
    benchmark::DoNotOptimize(survival_scan(lo, hi, static_cast<int>(state.range(1)), params, 30, exec));
  }
  state.SetLabel(exec == Exec::serial ? "serial" : "parallel");
}

void BM_embedded_bruteforce(benchmark::State& state) {
  const GridMap map = propagate_interior(bench_config(16, 106));
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_embedded_bruteforce(map, static_cast<int>(state.range(1)), exec));
  }
  state.SetLabel(exec == Exec::serial ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_propagate_interior)->ArgsProduct({{0, 1}, {40, 80}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_survival_scan)->ArgsProduct({{0, 1}, {64, 256}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_embedded_bruteforce)->ArgsProduct({{0, 1}, {10, 16}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
