#pragma once

#include <cstddef>
#include <vector>

namespace peakcount {

/// Parameters of the scalar field problem -eps^2 Lap u + u = u^p.
struct ProblemParams {
  double p = 2.0;  // nonlinearity exponent, > 1 and subcritical
  int dim = 3;     // ambient dimension N >= 1

  /// Throws InvalidParams on p <= 1, dim < 1, or supercritical p.
  void validate() const;
  bool subcritical() const;
};

struct SolverOptions {
  double ode_tol = 1e-12;         // per-step error control for the integrator
  double shoot_tol = 1e-15;       // relative bisection bracket width on U(0)
  double tail_threshold = 1e-12;  // grid is truncated where U drops below this
  double grid_step = 5e-3;        // spacing of the stored dense-output grid
  double residual_tol = 1e-8;     // contract on the a-posteriori ODE residual
  double max_radius = 120.0;      // hard cap for event integration
  int max_doublings = 60;
  int max_bisections = 240;
  int max_match_iterations = 40;
};

struct ProfileEval {
  double u = 0.0;
  double du = 0.0;
  double ddu = 0.0;
  bool extrapolated = false;  // true when r lies beyond the stored grid
};

/// The radial ground state U of -Lap U + U = U^p in R^N, normalized by
/// U(0) = max U. Built by solve_ground_state; immutable afterwards, so all
/// evaluations are safe to call concurrently.
///
/// The profile is stored on a uniform grid [0, truncation_radius] holding
/// (U, U') samples produced directly by the integrator (no interpolation in
/// the stored values). Between nodes, evaluation uses cubic Hermite
/// interpolation; U'' is always recovered from the ODE itself. Beyond the
/// grid, the matched linear far-field solution C * T(r) is used, where T is
/// the asymptotic form r^{-(N-1)/2} e^{-r} (1 + a1/r + ... + a6/r^6).
class GroundState {
public:
  const ProblemParams& params() const { return params_; }
  double u0() const { return u0_; }
  double decay_rate() const { return decay_rate_; }
  double truncation_radius() const { return r_trunc_; }
  double tail_amplitude() const { return tail_amp_; }
  double grid_step() const { return h_; }
  std::size_t grid_size() const { return u_.size(); }
  double grid_r(std::size_t i) const { return h_ * static_cast<double>(i); }
  const std::vector<double>& u_values() const { return u_; }
  const std::vector<double>& du_values() const { return du_; }
  double max_residual() const { return max_residual_; }

  /// Dense evaluation of (U, U', U'') at any r >= 0. U'' comes from the ODE:
  /// U'' = -(N-1) U'/r + U - U^p, with the r = 0 limit (U(0)-U(0)^p)/N.
  /// Throws NegativeRadius for r < 0.
  ProfileEval eval(double r) const;

  /// Far-field model value C * T(r); valid for r near/beyond the grid end.
  double tail_value(double r) const;
  double tail_derivative(double r) const;

  /// A-posteriori ODE residual per grid node, |dU'/dr - RHS| with dU'/dr
  /// estimated by 4th-order finite differences of the stored U' samples
  /// (an independent route from the integrator's own RHS evaluations).
  std::vector<double> ode_residuals() const;

private:
  friend GroundState solve_ground_state(const ProblemParams&, const SolverOptions&);

  ProblemParams params_;
  double u0_ = 0.0;
  double decay_rate_ = 0.0;
  double tail_amp_ = 0.0;   // C in U ~ C * T(r)
  double r_trunc_ = 0.0;
  double h_ = 0.0;
  double tail_threshold_ = 0.0;
  double max_residual_ = 0.0;
  std::vector<double> u_;
  std::vector<double> du_;
};

/// Shooting solve of the radial problem. Bisection on a = U(0) in [1, a_hi]
/// classifies trajectories (overshoot = U crosses zero, undershoot = U turns
/// upward while positive), then a two-sided match at a fitting radius
/// refines (a, tail amplitude) so the profile is accurate down to the tail
/// threshold. Throws InvalidParams / NoConvergence.
GroundState solve_ground_state(const ProblemParams& params,
                               const SolverOptions& opts = {});

}  // namespace peakcount
