// Drift-audit throughput: generator application per state and the cost of a
// full certificate audit over a large window.

#include <benchmark/benchmark.h>

#include "ctmc/criteria.hpp"
#include "ctmc/generator.hpp"
#include "ctmc/models.hpp"
#include "ctmc/window.hpp"

namespace {

using namespace ctmc;

// One mean-drift evaluation per window state: rate lookup, kernel row, field
// evaluations at the neighbours.
void BM_MeanDriftSweep(benchmark::State& state) {
  const Model srw = make_srw(1, RateProfile::constant(1.0));
  const ScalarField f = line_abs_field();
  const Window window = audit_window(srw, line_window(-50000, 50000), f);
  for (auto _ : state) {
    double acc = 0.0;
    for (StateId s : window.states()) acc += mean_drift(srw, f, s);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(window.size()));
}
BENCHMARK(BM_MeanDriftSweep);

// Full recurrence audit: window closure is prebuilt, so this times the
// criterion sweep itself (drift checks, margin tracking, witness scan).
void BM_CheckFosterAudit(benchmark::State& state) {
  const Model walk = make_biased_walk(0.4, RateProfile::constant(1.0));
  const ScalarField f("five_abs", [](StateId s) {
    return 5.0 * static_cast<double>(std::abs(line_point(s)));
  });
  const Window window = audit_window(walk, line_window(0, state.range(0)), f);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_foster(walk, f, {line_state(0)}, 1.0, window));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CheckFosterAudit)->Arg(100000)->Unit(benchmark::kMillisecond);

// Window closure audit itself (row normalization, neighbour enumeration,
// field evaluation at boundary neighbours).
void BM_AuditWindow(benchmark::State& state) {
  const Model walk = make_biased_walk(0.4, RateProfile::constant(1.0));
  const ScalarField f = line_abs_field();
  for (auto _ : state) {
    benchmark::DoNotOptimize(audit_window(walk, line_window(0, state.range(0)), f));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AuditWindow)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
