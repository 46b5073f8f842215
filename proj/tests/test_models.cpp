#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ctmc/errors.hpp"
#include "ctmc/generator.hpp"
#include "ctmc/models.hpp"
#include "ctmc/window.hpp"

using namespace ctmc;

namespace {

TransitionList row_of(const Model& m, StateId s) {
  TransitionList out;
  m.neighbors(s, out);
  return out;
}

double row_sum(const TransitionList& row) {
  double s = 0.0;
  for (const auto& t : row) s += t.prob;
  return s;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("rate profiles evaluate and splice") {
  const RateProfile c = RateProfile::constant(2.5);
  CHECK(c(0.0) == 2.5);
  CHECK(c(1e9) == 2.5);

  const RateProfile pw = RateProfile::power(2.0, 1.5);
  CHECK(pw(4.0) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(pw(0.5) == 2.0);  // spliced below 1

  // k = -1 drops the first product: gamma = L_0 * ln_(0)^kappa = level^(1+kappa).
  const RateProfile sq = RateProfile::logtower(1.0, -1, 0, 1.0);
  CHECK(sq(7.0) == doctest::Approx(49.0).epsilon(1e-14));
  CHECK(sq(1.0) == 1.0);  // spliced below ceil(domain_floor(0)) = 2

  const RateProfile lt = RateProfile::logtower(3.0, 1, 1, 2.0);
  const double x = 100.0;
  const double expect = 3.0 * (x * std::log(x)) * (x * std::log(x)) *
                        std::pow(std::log(x), 2.0);
  CHECK(lt(x) == doctest::Approx(expect).epsilon(1e-12));

  CHECK_THROWS_AS(RateProfile::constant(0.0), ParameterError);
  CHECK_THROWS_AS(RateProfile::power(-1.0, 2.0), ParameterError);
  CHECK_THROWS_AS(RateProfile::logtower(1.0, -2, 0, 1.0), ParameterError);
  const RateProfile bad = RateProfile::custom([](double) { return -1.0; }, "neg");
  CHECK_THROWS_AS(bad(5.0), NumericError);
}

TEST_CASE("birth-death rows are up-first and reflect at zero") {
  const Model walk = make_biased_walk(0.4, RateProfile::constant(1.0));
  const TransitionList mid = row_of(walk, line_state(5));
  REQUIRE(mid.size() == 2);
  CHECK(mid[0].to == line_state(6));
  CHECK(mid[0].prob == 0.4);
  CHECK(mid[1].to == line_state(4));
  CHECK(mid[1].prob == 0.6);

  const TransitionList at0 = row_of(walk, line_state(0));
  REQUIRE(at0.size() == 1);
  CHECK(at0[0].to == line_state(1));
  CHECK(at0[0].prob == 1.0);

  CHECK_THROWS_AS(make_biased_walk(0.0, RateProfile::constant(1.0)), ParameterError);
  CHECK_THROWS_AS(make_biased_walk(1.0, RateProfile::constant(1.0)), ParameterError);
}

TEST_CASE("pure birth and pure death ladders") {
  const Model birth = make_pure_birth(RateProfile::power(1.0, 2.0));
  const TransitionList b = row_of(birth, line_state(3));
  REQUIRE(b.size() == 1);
  CHECK(b[0].to == line_state(4));
  CHECK(birth.rate(line_state(3)) == doctest::Approx(9.0));

  const Model death = make_pure_death(RateProfile::custom(
      [](double level) { return std::pow(2.0, level); }, "2^x"));
  const TransitionList d = row_of(death, line_state(3));
  REQUIRE(d.size() == 1);
  CHECK(d[0].to == line_state(2));
  CHECK(death.rate(line_state(3)) == doctest::Approx(8.0));
  // 0 reflects upward so the chain stays conservative.
  const TransitionList d0 = row_of(death, line_state(0));
  REQUIRE(d0.size() == 1);
  CHECK(d0[0].to == line_state(1));
}

TEST_CASE("lamperti drift decays like C/x above the splice") {
  const Model lam = make_lamperti(0, 0.25, RateProfile::power(1.0, 1.0));
  const LineKernel* kernel = lam.line_kernel();
  REQUIRE(kernel != nullptr);
  // Splice point is ceil(domain_floor(0)) = 2: symmetric below.
  CHECK(kernel->p_up(1) == 0.5);
  CHECK(kernel->p_up(4) == doctest::Approx(0.5 * (1.0 + 0.25 / 4.0)).epsilon(1e-15));
  CHECK(kernel->p_up(100) == doctest::Approx(0.5 * (1.0 + 0.25 / 100.0)).epsilon(1e-15));
  CHECK(lam.rate(line_state(10)) == doctest::Approx(10.0));

  // k = 1 adds the 1/(2x) term: m(x) = 1/(2x) + C/(x ln x).
  const Model lam1 = make_lamperti(1, 0.3, RateProfile::constant(1.0));
  const double x = 50.0;
  const double m = 0.5 / x + 0.3 / (x * std::log(x));
  CHECK(lam1.line_kernel()->p_up(50) == doctest::Approx(0.5 * (1.0 + m)).epsilon(1e-14));

  CHECK_THROWS_AS(make_lamperti(0, 0.5, RateProfile::constant(1.0)), ParameterError);
  CHECK_THROWS_AS(make_lamperti(-1, 0.25, RateProfile::constant(1.0)), ParameterError);
}

TEST_CASE("srw rows are symmetric in every dimension") {
  const Model s1 = make_srw(1, RateProfile::constant(1.0));
  CHECK(row_of(s1, line_state(-4)).size() == 2);
  CHECK(row_sum(row_of(s1, line_state(-4))) == doctest::Approx(1.0).epsilon(1e-15));

  const Model s2 = make_srw(2, RateProfile::constant(1.0));
  const TransitionList r2 = row_of(s2, grid_state(3, -1));
  REQUIRE(r2.size() == 4);
  CHECK(row_sum(r2) == doctest::Approx(1.0).epsilon(1e-15));
  for (const auto& t : r2) CHECK(t.prob == 0.25);

  const Model s3 = make_srw(3, RateProfile::constant(1.0));
  const TransitionList r3 = row_of(s3, cube_state(0, 0, 0));
  REQUIRE(r3.size() == 6);
  CHECK(row_sum(r3) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(make_srw(4, RateProfile::constant(1.0)), ParameterError);
}

TEST_CASE("two-ray rows put the upward entry first on both rays") {
  const Model ray = make_two_ray(0.7, RateProfile::power(1.0, 2.0),
                                 RateProfile::constant(1.0));
  const TransitionList pos = row_of(ray, line_state(3));
  REQUIRE(pos.size() == 2);
  CHECK(pos[0].to == line_state(4));
  CHECK(pos[0].prob == 0.7);
  CHECK(pos[1].to == line_state(2));

  const TransitionList neg = row_of(ray, line_state(-3));
  REQUIRE(neg.size() == 2);
  CHECK(neg[0].to == line_state(-2));
  CHECK(neg[0].prob == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(neg[1].to == line_state(-4));
  CHECK(neg[1].prob == 0.7);

  const TransitionList origin = row_of(ray, line_state(0));
  REQUIRE(origin.size() == 2);
  CHECK(origin[0].prob == 0.5);

  // Rates come from the per-ray profiles evaluated at |x|.
  CHECK(ray.rate(line_state(4)) == doctest::Approx(16.0));
  CHECK(ray.rate(line_state(-4)) == doctest::Approx(1.0));
  CHECK(ray.rate(line_state(0)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(make_two_ray(0.5, RateProfile::constant(1.0), RateProfile::constant(1.0)),
                  ParameterError);
}

TEST_CASE("quadrant geometry: weights, psi, and the linearizing transform") {
  QuadrantGeometry g;
  g.s1 = 1.0;
  g.s2 = 1.0;
  g.lambda = 0.5;
  g.validate();

  const auto [a, b, u, v] = g.interior_weights();
  CHECK(a == doctest::Approx(0.0));
  CHECK(b == doctest::Approx(0.0));
  CHECK(u == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(v == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(2.0 * (a + b + u + v) == doctest::Approx(1.0).epsilon(1e-15));

  // Phi C Phi^T = I.
  const auto phi = g.phi();
  const double c11 = g.s1 * g.s1, c22 = g.s2 * g.s2, c12 = g.lambda;
  const double m00 = phi[0] * (c11 * phi[0] + c12 * phi[1]) +
                     phi[1] * (c12 * phi[0] + c22 * phi[1]);
  const double m01 = phi[0] * (c11 * phi[2] + c12 * phi[3]) +
                     phi[1] * (c12 * phi[2] + c22 * phi[3]);
  const double m11 = phi[2] * (c11 * phi[2] + c12 * phi[3]) +
                     phi[3] * (c12 * phi[2] + c22 * phi[3]);
  CHECK(m00 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m01 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(m11 == doctest::Approx(1.0).epsilon(1e-12));

  // psi = atan2(d^2, -lambda): obtuse for lambda > 0, right angle iff
  // lambda = 0, acute for lambda < 0.
  CHECK(g.psi() == doctest::Approx(std::atan2(0.75, -0.5)).epsilon(1e-15));
  CHECK(g.psi() > std::numbers::pi / 2.0);
  QuadrantGeometry indep = g;
  indep.lambda = 0.0;
  CHECK(indep.psi() == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
  QuadrantGeometry neg = g;
  neg.lambda = -0.5;
  CHECK(neg.psi() < std::numbers::pi / 2.0);

  // Interior row means reproduce zero drift and the prescribed covariance.
  const Model quad = make_quadrant(g, RateProfile::constant(1.0));
  const TransitionList row = row_of(quad, grid_state(5, 7));
  CHECK(row_sum(row) == doctest::Approx(1.0).epsilon(1e-14));
  double m1 = 0, m2 = 0, q11 = 0, q22 = 0, q12 = 0;
  for (const auto& t : row) {
    const auto [y1, y2] = grid_point(t.to);
    const double d1 = static_cast<double>(y1 - 5), d2v = static_cast<double>(y2 - 7);
    m1 += t.prob * d1;
    m2 += t.prob * d2v;
    q11 += t.prob * d1 * d1;
    q22 += t.prob * d2v * d2v;
    q12 += t.prob * d1 * d2v;
  }
  CHECK(m1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(m2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(q11 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q22 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q12 == doctest::Approx(0.5).epsilon(1e-14));

  // Boundary rows keep the prescribed reflection means.
  const TransitionList hrow = row_of(quad, grid_state(9, 0));
  double h1 = 0, h2 = 0;
  for (const auto& t : hrow) {
    const auto [y1, y2] = grid_point(t.to);
    h1 += t.prob * static_cast<double>(y1 - 9);
    h2 += t.prob * static_cast<double>(y2);
  }
  CHECK(h1 == doctest::Approx(g.drift_h[0]).scale(1.0).epsilon(1e-14));
  CHECK(h2 == doctest::Approx(g.drift_h[1]).epsilon(1e-14));

  const TransitionList origin_row = row_of(quad, grid_state(0, 0));
  REQUIRE(origin_row.size() == 1);
  CHECK(origin_row[0].to == grid_state(1, 1));

  // Inadmissible triples are rejected by name.
  QuadrantGeometry bad1 = g;
  bad1.s1 = 1.2;
  CHECK_THROWS_AS(bad1.validate(), ParameterError);
  QuadrantGeometry bad2 = g;
  bad2.s1 = 0.5;
  bad2.s2 = 0.5;  // s1^2 + s2^2 = 0.5 < 1 + |lambda|
  CHECK_THROWS_AS(bad2.validate(), ParameterError);
  QuadrantGeometry bad3 = g;
  bad3.lambda = 1.0;  // |lambda| >= s1 s2
  CHECK_THROWS_AS(bad3.validate(), ParameterError);
}

TEST_CASE("harmonic field is positive inside the wedge and zero at the vertex") {
  QuadrantGeometry g;
  g.lambda = 0.25;
  // Strictly below pi/(2 psi) so cos(beta theta) stays positive up to the edge rays.
  const double beta = 0.9 * std::numbers::pi / (2.0 * g.psi());
  const ScalarField h = harmonic_field(g, beta, 0.0);
  CHECK(h(grid_state(0, 0)) == 0.0);
  CHECK(h(grid_state(3, 4)) > 0.0);
  CHECK(h(grid_state(1, 0)) > 0.0);
  CHECK(h.traits().tends_to_infinity);
  CHECK_THROWS_AS(harmonic_field(g, beta, 2.0), ParameterError);
}

TEST_CASE("mock tree divides branch clocks and renormalizes weights") {
  MockTreeConfig cfg;
  cfg.n_branches = 100;
  const Model tree = make_mock_tree(cfg);

  const TransitionList root_row = row_of(tree, tree_root());
  REQUIRE(root_row.size() == 100);
  CHECK(row_sum(root_row) == doctest::Approx(1.0).epsilon(1e-12));
  // pi_n proportional to 1/n^2: ratio of branch 1 to branch 2 is 4.
  CHECK(root_row[0].prob / root_row[1].prob == doctest::Approx(4.0).epsilon(1e-12));

  // Rates divide by the branch clock K_n = n: profile(h) = h^2 for ell=0,
  // delta=1 above the splice at 2.
  CHECK(tree.rate(tree_state(3, 4)) == doctest::Approx(16.0 / 3.0).epsilon(1e-13));
  CHECK(tree.rate(tree_state(1, 4)) == doctest::Approx(16.0).epsilon(1e-13));
  CHECK(tree.rate(tree_state(5, 1)) == doctest::Approx(1.0 / 5.0).epsilon(1e-13));
  CHECK(tree.rate(tree_root()) == 1.0);

  // Height 1 falls back to the root with probability 1-p.
  const TransitionList h1 = row_of(tree, tree_state(7, 1));
  REQUIRE(h1.size() == 2);
  CHECK(h1[0].to == tree_state(7, 2));
  CHECK(h1[0].prob == 0.75);
  CHECK(h1[1].to == tree_root());
  CHECK(h1[1].prob == 0.25);

  const TransitionList h3 = row_of(tree, tree_state(7, 3));
  CHECK(h3[1].to == tree_state(7, 2));
}

TEST_CASE("grid windows enumerate the advertised boxes") {
  CHECK(square_window_2d(2).size() == 25);
  CHECK(cube_window_3d(1).size() == 27);
  const Window shell = quadrant_shell(0.0, 2.0);
  // (0,0),(0,1),(1,0),(1,1),(0,2),(2,0): norms 0,1,1,sqrt2,2,2.
  CHECK(shell.size() == 6);
  CHECK(shell.contains(grid_state(1, 1)));
  CHECK_FALSE(shell.contains(grid_state(2, 1)));
}

}  // TEST_SUITE
