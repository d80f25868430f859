#include <benchmark/benchmark.h>

#include <omp.h>

#include "mamab/experiment.hpp"

using namespace mamab;

namespace {

void BM_AllPairsSerial(benchmark::State& state) {
  const auto g = build_lattice(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(all_pairs_distances_serial(g.adjacency()));
  state.SetComplexityN(static_cast<std::int64_t>(g.num_vertices()));
}

void BM_AllPairsParallel(benchmark::State& state) {
  const auto g = build_lattice(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(all_pairs_distances(g.adjacency()));
  state.SetComplexityN(static_cast<std::int64_t>(g.num_vertices()));
}

SimulationConfig bench_config() {
  SimulationConfig c;
  c.horizon = 2000;
  c.trials = 8;
  c.gamma = 4;
  return c;
}

void BM_ExperimentSerial(benchmark::State& state) {
  const Scenario sc(bench_config());
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment_serial(sc).report.network_regret());
}

void BM_ExperimentParallel(benchmark::State& state) {
  const Scenario sc(bench_config());
  ExperimentOptions o;
  o.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(sc, o).report.network_regret());
}

}  // namespace

BENCHMARK(BM_AllPairsSerial)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AllPairsParallel)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ExperimentSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Arg(1)->Arg(omp_get_max_threads())->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
