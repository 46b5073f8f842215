#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ctmc/field.hpp"
#include "ctmc/model.hpp"
#include "ctmc/window.hpp"

namespace ctmc {

// ===========================================================================
// Rate profiles: gamma_x as a function of a nonnegative "level" (|x|, ||x||,
// branch height).  Every profile is positive; expressions involving iterated
// logarithms are spliced to the constant c below their domain floor so rates
// are defined on the whole space.
// ===========================================================================

class RateProfile {
 public:
  /// gamma = c everywhere.
  static RateProfile constant(double c);
  /// gamma = c * level^beta for level >= 1, spliced to c below 1.
  static RateProfile power(double c, double beta);
  /// gamma = c * L_k(level) * L_l(level) * ln_(l)(level)^kappa above the
  /// iterated-log domain floor, spliced to c below it.  k >= -1 (with
  /// L_(-1) = 1, so k = -1 drops the first product), l >= 0.
  static RateProfile logtower(double c, int k, int l, double kappa);
  /// Arbitrary positive profile; the label appears in reports.
  static RateProfile custom(std::function<double(double)> fn, std::string label);

  double operator()(double level) const;
  /// Levels below this evaluate to the splice constant.
  double splice_floor() const { return floor_; }
  const std::string& describe() const { return label_; }
  const std::vector<std::pair<std::string, double>>& params() const { return params_; }

 private:
  RateProfile() = default;
  std::function<double(double)> fn_;
  std::string label_;
  double floor_ = 0.0;
  std::vector<std::pair<std::string, double>> params_;
};

// ===========================================================================
// Level fields shared by the line/grid/tree families.
// ===========================================================================

/// f(x) = x as a double (signed; line codec).
ScalarField line_level_field();
/// f(x) = |x| (line codec); tends to infinity.
ScalarField line_abs_field();
/// f(x) = ||(x1,x2)||_2 (grid codec); tends to infinity.
ScalarField grid_norm_field();
/// f(x) = ||(x1,x2,x3)||_2 (cube codec); tends to infinity.
ScalarField cube_norm_field();
/// f(root) = 0, f(branch, height) = height (tree codec).
ScalarField tree_height_field();

// ===========================================================================
// Line-family chains (Z or Z+).  All expose a LineKernel fast path.  State 0
// of a Z+ chain reflects to 1, the minimal modification that keeps every
// kernel row stochastic.
// ===========================================================================

/// Birth-death chain on Z+ with arbitrary up-probability.
Model make_birth_death(const std::string& name, std::function<double(std::int64_t)> p_up,
                       RateProfile rate,
                       std::vector<std::pair<std::string, double>> params = {});

/// Deterministic upward ladder on Z+ (explosion testbed).
Model make_pure_birth(RateProfile rate);

/// Deterministic downward ladder on Z+ (implosion testbed); 0 reflects to 1.
Model make_pure_death(RateProfile rate);

/// Constant-bias nearest-neighbour walk on Z+, up-probability p in (0, 1).
Model make_biased_walk(double p, RateProfile rate);

/// Near-critical walk on Z+ whose mean drift decays along the iterated-log
/// ladder:
///   m(x) = sum_{i=0..k-1} 1/(2 L_i(x)) + C / L_k(x)   for x >= x0,
/// realized by +-1 jumps with p(x) = (1 + m(x))/2 clamped to
/// [1e-3, 1 - 1e-3]; below the splice point x0 = ceil(domain_floor(k)) the
/// walk is symmetric.  C < 1/2 is the recurrent regime and C > 1/2 the
/// transient one; C = 1/2 is rejected as on-the-boundary.
Model make_lamperti(int k, double C, RateProfile rate);

/// Simple random walk on Z^d, d in {1, 2, 3}; rate evaluated at the
/// Euclidean norm.
Model make_srw(int d, RateProfile rate);

/// Two half-lines glued at 0.  Outward bias p in (1/2, 1) on each ray:
/// from x > 0 the walk moves to x+1 with probability p; from x < 0 to x-1
/// with probability p; from 0 to +-1 with probability 1/2 each.  Rates come
/// from separate profiles per ray, evaluated at |x|; gamma_0 uses the
/// negative-ray profile.
Model make_two_ray(double p, RateProfile rate_pos, RateProfile rate_neg);

// ===========================================================================
// Planar quadrant: reflected random walk on Z+^2.
// ===========================================================================

/// Interior increment law and boundary reflection drifts.  The interior
/// kernel is the symmetric 8-neighbour law matching the prescribed
/// covariance exactly:
///   w(+-1,0) = (1 - s2^2)/2,          w(0,+-1) = (1 - s1^2)/2,
///   w(1,1) = w(-1,-1) = (s1^2 + s2^2 - 1 + lambda)/4,
///   w(1,-1) = w(-1,1) = (s1^2 + s2^2 - 1 - lambda)/4.
/// Admissible iff s1^2 <= 1, s2^2 <= 1, s1^2 + s2^2 >= 1 + |lambda| and
/// |lambda| < s1 s2.  Boundary rows keep jumps {(+-1,0),(0,1)} on the
/// horizontal axis (resp. mirrored on the vertical axis) with means equal to
/// the prescribed reflection drift; the origin jumps to (1,1).
struct QuadrantGeometry {
  double s1 = 1.0;      ///< sqrt variance of the first increment component
  double s2 = 1.0;      ///< sqrt variance of the second component
  double lambda = 0.0;  ///< increment covariance
  std::array<double, 2> drift_h{0.0, 0.5};  ///< mean drift on the horizontal axis
  std::array<double, 2> drift_v{0.5, 0.0};  ///< mean drift on the vertical axis

  /// Throws ParameterError naming the violated constraint.
  void validate() const;

  double d2() const { return s1 * s1 * s2 * s2 - lambda * lambda; }
  /// Wedge angle after the isotropy transform: psi = atan2(d^2, -lambda),
  /// in (0, pi); pi/2 exactly when lambda = 0.
  double psi() const;
  /// Linearizing transform Phi with Phi C Phi^T = I (row-major 2x2).
  std::array<double, 4> phi() const;
  /// Reflection angles of the transformed boundary drifts, measured from the
  /// inward normal of each transformed face, positive toward the vertex.
  /// Must lie in (-pi/2, pi/2).
  double psi1() const;
  double psi2() const;
  /// chi = (psi1 + psi2) / psi.
  double chi() const;
  /// Interior weights {a, b, u, v} as documented above.
  std::array<double, 4> interior_weights() const;
};

Model make_quadrant(const QuadrantGeometry& geometry, RateProfile rate);

/// Wedge-harmonic comparison field h(x) = ||y||^beta cos(beta theta(y) -
/// beta1) with y = Phi x and theta the polar angle of y.  Requires beta > 0
/// and both beta1 and beta*psi - beta1 inside (-pi/2, pi/2), which keeps h
/// positive on the open wedge.
ScalarField harmonic_field(const QuadrantGeometry& geometry, double beta, double beta1);

/// All states of Z+^2 with norm in [r_lo, r_hi].
Window quadrant_shell(double r_lo, double r_hi);

// ===========================================================================
// Scattering tree: a root that fans out to countably many biased rays with
// per-branch clocks.
// ===========================================================================

struct MockTreeConfig {
  double p = 0.75;  ///< outward bias along each ray, in (1/2, 1)
  /// Unnormalized branch weights pi_n, n >= 1; truncated at n_branches and
  /// renormalized to an exact probability vector.
  std::function<double(int)> pi_weight = [](int n) { return 1.0 / (static_cast<double>(n) * n); };
  /// Per-branch clock divisor K_n > 0: rates on branch n are
  /// profile_n(height) / K_n, so large K_n slows the branch down and raises
  /// its explosion-time contribution proportionally.
  std::function<double(int)> branch_K = [](int n) { return static_cast<double>(n); };
  int ell = 0;        ///< iterated-log depth of the per-branch profile
  double delta = 1.0; ///< exponent: profile(h) = L_ell(h) * ln_(ell)(h)^delta
  int n_branches = 1000;
};

/// Root jumps to (n, 1) with probability pi_n; on a branch the walk is the
/// outward-biased ray walk, and height 1 falls back to the root with
/// probability 1-p.  gamma_root = 1.
Model make_mock_tree(const MockTreeConfig& config);

// ===========================================================================
// Grid windows.
// ===========================================================================

/// All states of Z^2 with max-norm at most radius.
Window square_window_2d(std::int64_t radius);
/// All states of Z^3 with max-norm at most radius (cube codec).
Window cube_window_3d(std::int64_t radius);

/// Z^3 codec: 21 bits per signed coordinate (|xi| < 2^20).
StateId cube_state(std::int64_t x1, std::int64_t x2, std::int64_t x3);
std::array<std::int64_t, 3> cube_point(StateId s);

}  // namespace ctmc
