// Truncated-solver cost: window assembly, factorization/iteration, and the
// recomputed defect audit together, at the sizes the cross-validation
// harness actually uses.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "ctmc/models.hpp"
#include "ctmc/solver.hpp"
#include "ctmc/state.hpp"
#include "ctmc/window.hpp"

namespace {

using namespace ctmc;

// Line chain: bandwidth-1 system, always on the direct banded path.
void BM_SolveMeanHittingLine(benchmark::State& state) {
  const Model walk = make_biased_walk(0.4, RateProfile::constant(1.0));
  const std::int64_t n = state.range(0);
  Truncation truncation;
  truncation.window = audit_window(walk, line_window(0, n));
  truncation.targets = {line_state(0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_mean_hitting(walk, truncation));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SolveMeanHittingLine)
    ->Arg(1000)
    ->Arg(10000)
    ->Arg(100000)
    ->Unit(benchmark::kMillisecond);

// Life-time solve on the explosive quadratic birth chain (the pi^2/6
// oracle's workhorse).
void BM_SolveMeanExplosionQuadratic(benchmark::State& state) {
  const Model birth = make_pure_birth(RateProfile::power(1.0, 2.0));
  Truncation truncation;
  truncation.window = audit_window(birth, line_window(1, state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_mean_explosion(birth, truncation));
  }
}
BENCHMARK(BM_SolveMeanExplosionQuadratic)->Arg(10000)->Unit(benchmark::kMillisecond);

// Reflected quadrant: genuine 2D sparsity.  The small shell factors with
// fill-in on the direct path; the large one crosses the size limit with wide
// bandwidth and runs the preconditioned iterative path.
void BM_SolveQuadrant(benchmark::State& state) {
  QuadrantGeometry geo;
  geo.lambda = 0.25;
  const Model quadrant = make_quadrant(geo, RateProfile::constant(1.0));
  const double radius = static_cast<double>(state.range(0));
  Truncation truncation;
  truncation.window = audit_window(quadrant, quadrant_shell(0.0, radius));
  std::vector<StateId> axes;
  for (StateId s : truncation.window.states()) {
    const auto [x, y] = grid_point(s);
    if (x == 0 || y == 0) axes.push_back(s);
  }
  truncation.targets = std::move(axes);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_mean_hitting(quadrant, truncation));
  }
  state.counters["states"] = static_cast<double>(truncation.window.size());
}
BENCHMARK(BM_SolveQuadrant)->Arg(150)->Arg(290)->Unit(benchmark::kMillisecond);

}  // namespace
