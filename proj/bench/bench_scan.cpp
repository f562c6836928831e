#include <benchmark/benchmark.h>
#include <omp.h>

#include "takagi/ensemble.hpp"
#include "takagi/fields.hpp"
#include "takagi/scan.hpp"

using namespace takagi;

namespace {

MatrixField bench_field(int n) { return make_field(n, 2024).as_field(ensemble_domain()); }

void BM_takagi_svd(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Stream rng(1);
  const CSym a = sample_matrix(n, rng).A;
  for (auto _ : state) benchmark::DoNotOptimize(takagi_svd(a));
}
BENCHMARK(BM_takagi_svd)->Arg(10)->Arg(30)->Arg(100);

void BM_takagi_doubled(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  Stream rng(1);
  const CSym a = sample_matrix(n, rng).A;
  for (auto _ : state) benchmark::DoNotOptimize(takagi_from_doubled(a));
}
BENCHMARK(BM_takagi_doubled)->Arg(10)->Arg(30)->Arg(100);

// Edge-cached scanner; range(1) is the thread count.
void BM_grid_scan(benchmark::State& state) {
  const auto f = bench_field(static_cast<int>(state.range(0)));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  const Grid g{f.domain, 16, 8};
  for (auto _ : state) benchmark::DoNotOptimize(grid_scan(f, g));
  state.counters["boxes/s"] = benchmark::Counter(double(g.m * g.k), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_grid_scan)
    ->ArgsProduct({{6, 12}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

// Reference: one independent loop per box, single-threaded.
void BM_grid_scan_serial(benchmark::State& state) {
  const auto f = bench_field(static_cast<int>(state.range(0)));
  const Grid g{f.domain, 16, 8};
  for (auto _ : state) benchmark::DoNotOptimize(grid_scan_serial(f, g));
  state.counters["boxes/s"] = benchmark::Counter(double(g.m * g.k), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_grid_scan_serial)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
