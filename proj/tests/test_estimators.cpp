// Censored-sample bookkeeping, moment estimates, tail-exponent fits on
// synthetic samples with known exponents, and the per-start implosion scan.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ctmc/errors.hpp"
#include "ctmc/estimators.hpp"
#include "ctmc/models.hpp"
#include "ctmc/rng.hpp"
#include "ctmc/simulate.hpp"
#include "ctmc/state.hpp"
#include "doctest.h"

namespace {

using namespace ctmc;

// Pareto(alpha) sample, survival P(V > v) = v^-alpha on [1, inf).
CensoredSample pareto_sample(double alpha, std::size_t n, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  CensoredSample sample;
  sample.cap = 1e300;
  sample.values.reserve(n);
  sample.censored.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    sample.values.push_back(std::pow(1.0 - rng.u01_open(), -1.0 / alpha));
  }
  return sample;
}

TEST_SUITE("estimators") {

TEST_CASE("censored-sample invariants are enforced") {
  CensoredSample good;
  good.values = {1.0, 5.0, 10.0};
  good.censored = {false, false, true};
  good.cap = 10.0;
  CHECK_NOTHROW(validate_sample(good));
  CHECK(good.censored_mass() == doctest::Approx(1.0 / 3.0));

  CensoredSample wrong_cap = good;
  wrong_cap.values[2] = 9.0;  // censored but not at the cap
  CHECK_THROWS_AS(validate_sample(wrong_cap), ParameterError);

  CensoredSample overshoot = good;
  overshoot.values[0] = 10.0;  // uncensored at the cap
  CHECK_THROWS_AS(validate_sample(overshoot), ParameterError);

  CensoredSample ragged = good;
  ragged.censored.pop_back();
  CHECK_THROWS_AS(validate_sample(ragged), ParameterError);
}

TEST_CASE("recapping re-censors at the new cap") {
  CensoredSample sample;
  sample.values = {1.0, 5.0, 10.0};
  sample.censored = {false, false, true};
  sample.cap = 10.0;

  const CensoredSample tight = sample.recapped(5.0);
  CHECK(tight.cap == 5.0);
  CHECK(tight.values == std::vector<double>{1.0, 5.0, 5.0});
  CHECK(tight.censored == std::vector<bool>{false, true, true});
  CHECK_NOTHROW(validate_sample(tight));

  CHECK_THROWS_AS(sample.recapped(11.0), ParameterError);
  CHECK_THROWS_AS(sample.recapped(0.0), ParameterError);
}

TEST_CASE("passage_sample converts hits and censors, policing the jump budget") {
  Caps caps;
  caps.max_jumps = 1000;
  caps.max_time = 50.0;

  std::vector<PathOutcome> outcomes;
  for (int i = 0; i < 299; ++i) {
    outcomes.push_back({PathStatus::hit, 0.5 + 0.001 * i, 10, line_state(0), 1.0});
  }
  outcomes.push_back({PathStatus::time_censored, 50.0, 900, line_state(4), 1.0});

  const CensoredSample sample = passage_sample(outcomes, caps);
  CHECK(sample.size() == 300);
  CHECK(sample.cap == 50.0);
  CHECK(sample.values[0] == 0.5);
  CHECK(!sample.censored[0]);
  CHECK(sample.values[299] == 50.0);
  CHECK(sample.censored[299]);

  // One jump-censored run in 300 (0.33%) stays under the 0.5% guard and is
  // treated as censored at the time cap.
  outcomes[0] = {PathStatus::jump_censored, 3.0, 1000, line_state(40), 0.2};
  const CensoredSample tolerated = passage_sample(outcomes, caps);
  CHECK(tolerated.censored[0]);
  CHECK(tolerated.values[0] == 50.0);

  // Two in 300 (0.67%) breach it.
  outcomes[1] = {PathStatus::jump_censored, 3.0, 1000, line_state(40), 0.2};
  CHECK_THROWS_AS(passage_sample(outcomes, caps), ParameterError);
}

TEST_CASE("moment estimates are exact on degenerate samples") {
  CensoredSample twos;
  twos.values.assign(50, 2.0);
  twos.censored.assign(50, false);
  twos.cap = 10.0;

  const MomentEstimate second = estimate_moment(twos, 2.0);
  CHECK(second.estimate == 4.0);
  CHECK(second.std_err == 0.0);
  CHECK(!second.lower_bound);

  CensoredSample mixed;
  mixed.values = {1.0, 3.0, 10.0};
  mixed.censored = {false, false, true};
  mixed.cap = 10.0;
  const MomentEstimate mean = estimate_moment(mixed, 1.0);
  CHECK(mean.estimate == doctest::Approx(14.0 / 3.0));
  CHECK(mean.lower_bound);
  CHECK(mean.std_err > 0.0);

  CensoredSample single;
  single.values = {2.0};
  single.censored = {false};
  single.cap = 5.0;
  CHECK(estimate_moment(single, 1.0).std_err == 0.0);

  CHECK_THROWS_AS(estimate_moment(twos, 0.0), ParameterError);
  CHECK_THROWS_AS(estimate_moment(CensoredSample{}, 1.0), ParameterError);
}

TEST_CASE("tail fit recovers Pareto exponents across two decades of heaviness") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const CensoredSample sample = pareto_sample(alpha, 100000, 2024);
    const TailReport report = estimate_tail_exponent(sample);
    CAPTURE(alpha);
    REQUIRE(!report.inconclusive);
    CHECK(report.points >= 8);
    CHECK(report.std_err < 0.2);
    CHECK(std::abs(report.p_hat - alpha) <= 3.0 * report.std_err);
    CHECK(report.fit_lo < report.fit_hi);
    CHECK(report.quantile_lo == 0.90);
    CHECK(report.quantile_hi == 0.999);
    CHECK(report.detail.find("fitted") != std::string::npos);
  }
}

TEST_CASE("tail fit survives moderate censoring") {
  CensoredSample sample = pareto_sample(1.0, 100000, 77);
  // Censor at the 97% point of the Pareto(1) law: survival(100/3) = 3%.
  const double cap = 100.0 / 3.0;
  sample.cap = 1e300;
  sample = sample.recapped(cap);
  CHECK(sample.censored_mass() == doctest::Approx(0.03).epsilon(0.15));

  const TailReport report = estimate_tail_exponent(sample);
  REQUIRE(!report.inconclusive);
  CHECK(report.censored_mass == doctest::Approx(0.03).epsilon(0.15));
  CHECK(std::abs(report.p_hat - 1.0) <= 3.0 * report.std_err);
}

TEST_CASE("tail verdicts separate finite from infinite moments") {
  const CensoredSample heavy = pareto_sample(1.0, 100000, 5);
  const TailReport report = estimate_tail_exponent(heavy);
  REQUIRE(!report.inconclusive);
  CHECK(report.verdict_for_moment(0.25) == TailVerdict::consistent_finite);
  CHECK(report.verdict_for_moment(10.0) == TailVerdict::consistent_infinite);
  CHECK(report.verdict_for_moment(report.p_hat) == TailVerdict::inconclusive);

  // Light (exponential) tails look finite at every tested order.
  Xoshiro256 rng(31);
  CensoredSample light;
  light.cap = 1e300;
  light.censored.assign(100000, false);
  for (std::size_t i = 0; i < 100000; ++i) light.values.push_back(rng.exponential(1.0));
  const TailReport exp_report = estimate_tail_exponent(light);
  REQUIRE(!exp_report.inconclusive);
  CHECK(exp_report.verdict_for_moment(0.25) == TailVerdict::consistent_finite);
  CHECK(exp_report.verdict_for_moment(1.0) == TailVerdict::consistent_finite);
  CHECK(exp_report.verdict_for_moment(2.0) == TailVerdict::consistent_finite);

  CHECK(std::string(tail_verdict_name(TailVerdict::consistent_finite)) == "consistent_finite");
  CHECK(std::string(tail_verdict_name(TailVerdict::consistent_infinite)) ==
        "consistent_infinite");
  CHECK(std::string(tail_verdict_name(TailVerdict::inconclusive)) == "inconclusive");
}

TEST_CASE("small samples yield an inconclusive tail report, not an error") {
  const CensoredSample tiny = pareto_sample(1.0, 100, 11);
  const TailReport report = estimate_tail_exponent(tiny);
  CHECK(report.inconclusive);
  CHECK(std::isnan(report.p_hat));
  CHECK(std::isnan(report.std_err));
  CHECK(report.verdict_for_moment(1.0) == TailVerdict::inconclusive);
}

TEST_CASE("tail fits are deterministic") {
  const CensoredSample sample = pareto_sample(2.0, 50000, 123);
  const TailReport a = estimate_tail_exponent(sample);
  const TailReport b = estimate_tail_exponent(sample);
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.std_err == b.std_err);
  CHECK(a.points == b.points);
  CHECK(a.detail == b.detail);
}

TEST_CASE("implosion scan sees the uniform bound of the doubling-rate death chain") {
  const Model death = make_pure_death(
      RateProfile::custom([](double level) { return std::exp2(level); }, "2^level"));
  const std::vector<StateId> starts = {line_state(0), line_state(5), line_state(8),
                                       line_state(12), line_state(16)};
  Caps caps;
  caps.max_jumps = 1000;
  caps.max_time = 1000.0;

  const ImplosionScan scan = implosion_scan(death, line_target_le(0), starts,
                                            line_level_field(), 99, 400, caps, 2);
  REQUIRE(scan.starts.size() == 5);
  CHECK(scan.runs_per_start == 400);
  CHECK(scan.excluded[0]);
  CHECK(scan.mean[0] == 0.0);
  CHECK(scan.level[1] == 5.0);
  CHECK(scan.level[4] == 16.0);
  // E_x tau = sum_{k<=x} 2^-k < 1 uniformly; means hover just below 1.
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(!scan.excluded[i]);
    CHECK(scan.mean[i] == doctest::Approx(1.0).epsilon(0.15));
    CHECK(scan.std_err[i] > 0.0);
  }
  CHECK(scan.sup_hat < 1.2);
  CHECK(std::abs(scan.slope) < 0.02);

  // Determinism across calls and worker counts.
  const ImplosionScan again = implosion_scan(death, line_target_le(0), starts,
                                             line_level_field(), 99, 400, caps, 1);
  CHECK(scan.mean == again.mean);
  CHECK(scan.slope == again.slope);
}

TEST_CASE("implosion scan sees the rising means of the unit-rate death chain") {
  const Model death = make_pure_death(RateProfile::constant(1.0));
  const std::vector<StateId> starts = {line_state(2), line_state(6), line_state(10),
                                       line_state(14)};
  Caps caps;
  caps.max_jumps = 1000;
  caps.max_time = 1000.0;

  // E_x tau = x exactly, so the trend slope sits near 1.
  const ImplosionScan scan = implosion_scan(death, line_target_le(0), starts,
                                            line_level_field(), 7, 400, caps, 2);
  CHECK(scan.slope > 0.5);
  CHECK(scan.sup_hat > 10.0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(scan.mean[i] ==
          doctest::Approx(static_cast<double>(line_point(starts[i]))).epsilon(0.2));
  }
}

TEST_CASE("implosion scan validates its inputs") {
  const Model death = make_pure_death(RateProfile::constant(1.0));
  const std::vector<StateId> starts = {line_state(2), line_state(6)};
  Caps caps;
  caps.max_jumps = 100;
  caps.max_time = 100.0;

  CHECK_THROWS_AS(implosion_scan(death, Target{}, starts, line_level_field(), 7, 10, caps),
                  ParameterError);
  CHECK_THROWS_AS(implosion_scan(death, line_target_le(0), starts, line_level_field(), 7, 0, caps),
                  ParameterError);
  const std::vector<StateId> inside = {line_state(-1), line_state(0), line_state(3)};
  CHECK_THROWS_AS(
      implosion_scan(death, line_target_le(0), inside, line_level_field(), 7, 10, caps),
      ParameterError);
}

}  // TEST_SUITE

}  // namespace
