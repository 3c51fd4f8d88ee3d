#pragma once

#include <map>
#include <vector>

#include "peakcount/ground_state.hpp"

namespace peakcount {

/// Hyperplane energy density e(r) = 1/2 U'(r)^2 + 1/2 U(r)^2 - U(r)^{p+1}/(p+1),
/// the radial profile of the energy integrand restricted to (y', 0). By
/// radial symmetry |grad U(y', 0)| = |U'(|y'|)|. For N = 1 the first integral
/// of the 1D equation collapses e to U'^2.
class RadialWeight {
public:
  explicit RadialWeight(const GroundState& gs)
      : gs_(&gs), hyperplane_dim_(gs.params().dim - 1) {}

  double operator()(double r) const;
  const GroundState& ground_state() const { return *gs_; }
  int hyperplane_dim() const { return hyperplane_dim_; }

  /// e(r) under the far-field tail model (used for certified tail
  /// corrections beyond the stored grid).
  double tail_density(double r) const;

private:
  const GroundState* gs_;
  int hyperplane_dim_;
};

struct MomentOptions {
  double quad_tol = 1e-10;  // absolute target per moment (relative for huge ones)
  std::size_t max_panels = 4000;
};

/// Surface integral of the monomial w^beta over the unit sphere S^{d-1}:
/// A_beta = 2 prod_j Gamma((beta_j+1)/2) / Gamma((|beta|+d)/2) when every
/// beta_j is even, 0 otherwise. Computed through lgamma.
double angular_factor(const std::vector<int>& beta);

/// Weighted radial integral int_0^inf w(r) r^k dr for w = e or w = U'^2,
/// with adaptive Gauss-Kronrod panels on the stored grid plus an analytic
/// tail correction. value/error as in QuadResult.
struct RadialMoment {
  double value = 0.0;
  double error = 0.0;
};

/// Immutable cache of radial and monomial moments of the energy density.
///
/// M_beta = int_{R^d} e(|y|) y^beta dy factorizes as A_beta * I_{|beta|+d-1}
/// with I_k the radial integral above. c_m = M_{m e_1}. The table also holds
/// the independent identity route to c_{2k},
///   c_{2k} = (2k/(2k+1)) A_{(2k+2) e_1} int_0^inf U'(r)^2 r^{2k+d-1} dr,
/// which serves as a cross-check oracle for the direct computation.
class MomentTable {
public:
  /// Precomputes every even monomial moment with |beta| <= max_order
  /// (independent moments are evaluated concurrently). d >= 1 required.
  MomentTable(const RadialWeight& w, int max_order, const MomentOptions& opts = {});

  int max_order() const { return max_order_; }
  int dim() const { return d_; }
  double quad_tol() const { return opts_.quad_tol; }

  /// int_0^inf e(r) r^k dr. Throws MomentUnavailable beyond the precomputed
  /// range, QuadratureFailure if the error target could not be met.
  double radial_moment(int k) const;
  double radial_moment_error(int k) const;

  /// M_beta; exactly 0 when any beta_j is odd.
  double monomial_moment(const std::vector<int>& beta) const;

  /// c_m = M_{m e_1}.
  double c_moment(int m) const;

  /// Identity route to c_{2k}; exactly 0 for k = 0 by its (1 - 1/(2k+1))
  /// prefactor.
  double c_moment_identity(int k) const;

  /// Numerical-zero threshold for c moments: 1e-7 * c_2.
  double c_tol() const;

private:
  const RadialWeight* weight_;
  int d_;
  int max_order_;
  MomentOptions opts_;
  std::vector<double> radial_;        // k = 0 .. radial_max_
  std::vector<double> radial_err_;
  std::vector<double> radial_du2_;    // int U'^2 r^k dr, same index range
  int radial_max_ = 0;
  std::map<std::vector<int>, double> monomial_;
};

/// Convenience entry points mirroring the operation names.
double weight_eval(const RadialWeight& w, double r);
double radial_moment(const RadialWeight& w, int k, const MomentOptions& opts = {});
double monomial_moment(const MomentTable& table, const std::vector<int>& beta);
double c_moment(const MomentTable& table, int m);
double c_moment_identity(const MomentTable& table, int k);

}  // namespace peakcount
