// Serial reference versus OpenMP kernels. Arg(0) is the worker count.
#include <benchmark/benchmark.h>

#include <algorithm>
#include <thread>

#include "rilab/experiments.hpp"
#include "rilab/potential.hpp"

using namespace rilab;

namespace {

WalkConfig bench_config(int workers) {
  WalkConfig cfg;
  cfg.N = 9;
  cfg.m = 3;
  cfg.workers = workers;
  return cfg;
}

void BM_EstimateLhs(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<int>(state.range(0)));
  const auto K = PatternSet::preset("origin", 3);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_lhs(cfg, K, far_corner(cfg), 500));
}

void BM_Mixing(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mixing_check(cfg, cfg.n(), 100 * cfg.volume()));
}

void BM_CapacityMcSerial(benchmark::State& state) {
  const auto K = PatternSet::preset("pair", 3);
  for (auto _ : state) benchmark::DoNotOptimize(capacity_mc_serial(K, 16, 20, 1));
}

void BM_CapacityMc(benchmark::State& state) {
  const auto K = PatternSet::preset("pair", 3);
  const CapacityMcOptions opts{1, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(capacity_mc(K, 16, 20, opts));
}

void worker_args(benchmark::internal::Benchmark* b) {
  b->Arg(1);
  // Always exercise the OpenMP path, even on a single core.
  b->Arg(std::max(4, static_cast<int>(std::thread::hardware_concurrency())));
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_EstimateLhs)->Apply(worker_args);
BENCHMARK(BM_Mixing)->Apply(worker_args);
BENCHMARK(BM_CapacityMcSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CapacityMc)->Apply(worker_args);

BENCHMARK_MAIN();
