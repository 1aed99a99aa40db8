// Serial vs OpenMP seed fan-out on the same experiment. Both paths must give
// identical records; this only measures wall time.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "streambandit/harness.hpp"

using namespace sbandit;

namespace {

ExperimentConfig hard_family(int passes, std::uint64_t horizon) {
  ExperimentConfig c;
  c.instance.kind = InstanceSource::Kind::Hard;
  c.instance.hard.num_arms = passes == 1 ? 16 : 18;
  c.instance.hard.horizon = horizon;
  c.instance.hard.passes = passes;
  c.instance.hard.b = passes;
  c.algorithm.mbse.memory = 3;
  c.algorithm.mbse.passes = passes;
  c.horizons = {horizon};
  c.seeds = 32;
  c.master_seed = 1;
  return c;
}

void BM_SeedsSerial(benchmark::State& state) {
  const auto cfg = hard_family(static_cast<int>(state.range(0)), static_cast<std::uint64_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(run_seeds_serial(cfg, cfg.horizons[0]));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.seeds * cfg.horizons[0]));
}

void BM_SeedsParallel(benchmark::State& state) {
  const auto cfg = hard_family(static_cast<int>(state.range(0)), static_cast<std::uint64_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(run_seeds(cfg, cfg.horizons[0]));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.seeds * cfg.horizons[0]));
  state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_SeedsSerial)->Args({1, 100000})->Args({2, 100000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeedsParallel)->Args({1, 100000})->Args({2, 100000})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
