// Trajectory sampling throughput: the tight holding-time/jump loop is the
// budget for every Monte Carlo cross-check, so regressions here multiply
// directly into scenario runtimes.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "ctmc/models.hpp"
#include "ctmc/simulate.hpp"

namespace {

using namespace ctmc;

// Pure death from x0 hits 0 in exactly x0 jumps: a fixed-length run that
// isolates the per-jump cost on the nearest-neighbour fast path.
void BM_SamplePathPureDeath(benchmark::State& state) {
  const Model death = make_pure_death(RateProfile::power(1.0, 1.0));
  const std::int64_t x0 = state.range(0);
  Caps caps;
  caps.max_jumps = static_cast<std::uint64_t>(x0) + 10;
  caps.max_time = 1e300;
  caps.target = line_target_le(0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_path(death, line_state(x0), seed++, caps));
  }
  state.SetItemsProcessed(state.iterations() * x0);
}
BENCHMARK(BM_SamplePathPureDeath)->Arg(1000)->Arg(100000);

// Recurrent biased walk passage 10 -> 0: random-length runs through the
// general kernel path; items = jumps actually simulated.
void BM_SamplePathBiasedWalk(benchmark::State& state) {
  const Model walk = make_biased_walk(0.4, RateProfile::constant(1.0));
  Caps caps;
  caps.max_jumps = 1000000;
  caps.max_time = 1e300;
  caps.target = line_target_le(0);
  std::uint64_t seed = 1;
  std::uint64_t jumps = 0;
  for (auto _ : state) {
    const PathOutcome outcome = sample_path(walk, line_state(10), seed++, caps);
    jumps += outcome.jumps;
    benchmark::DoNotOptimize(outcome);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(jumps));
}
BENCHMARK(BM_SamplePathBiasedWalk);

// Whole-batch path including per-trajectory seed derivation and outcome
// collection, as the estimators consume it.
void BM_RunBatchBiasedWalk(benchmark::State& state) {
  const Model walk = make_biased_walk(0.4, RateProfile::constant(1.0));
  Caps caps;
  caps.max_jumps = 1000000;
  caps.max_time = 1e300;
  caps.target = line_target_le(0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(walk, line_state(10), seed++, 1000, caps));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_RunBatchBiasedWalk)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
