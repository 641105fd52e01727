// Serial reference vs OpenMP kernel for each seed-indexed batch.
// Arg 0 selects Serial, 1 Parallel.

#include <benchmark/benchmark.h>

#include <random>

#include "treecmp/batch.hpp"
#include "treecmp/pentagon.hpp"
#include "treecmp/simplex.hpp"

using namespace treecmp;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) ? Execution::Parallel : Execution::Serial;
}

void BM_GridBest(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Matrix m(6, 6);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) m(i, j) = g(rng);
  }
  m = 0.5 * (m + m.transpose()).eval();
  for (auto _ : state) benchmark::DoNotOptimize(simplex::grid_best(m, 30, 8, exec_of(state)));
}

void BM_MtwScan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(batch::mtw_scan(1, 200, 0.02, 2, 1.0, exec_of(state)));
}

void BM_SphereSample(benchmark::State& state) {
  const auto tree = parse_tree("3(1)");
  for (auto _ : state) {
    benchmark::DoNotOptimize(batch::sphere_sample(tree, 2, Geometry::Euclidean, 1, 10, {}, exec_of(state)));
  }
}

void BM_Planted(benchmark::State& state) {
  const auto tree = parse_tree("2(2)");
  for (auto _ : state) benchmark::DoNotOptimize(batch::planted(tree, 3, 1, 100, {}, exec_of(state)));
}

void BM_Pivotal(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(batch::pivotal(2, 2, 1, 20, 2, exec_of(state)));
}

void BM_PentagonGrid(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(pentagon_grid_search({1e-5, 1e-4, 1e-3}, {10, 100}, {}, exec_of(state)));
  }
}

}  // namespace

BENCHMARK(BM_GridBest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MtwScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SphereSample)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Planted)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Pivotal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PentagonGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
