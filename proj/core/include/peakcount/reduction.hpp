#pragma once

#include <span>
#include <vector>

#include "peakcount/poly.hpp"
#include "peakcount/weight.hpp"

namespace peakcount {

/// The reduced vector field as an exact polynomial map R^d -> R^d.
///
/// Component i is the integral of e(|y|) d_i Q(y + xi) over R^d, expanded by
/// the shift identity P(y + xi) = sum_gamma binom(e, gamma) y^gamma
/// xi^{e-gamma} applied monomial-by-monomial and integrated term-by-term:
/// only even gamma survive and contribute the moment M_gamma. The expansion
/// is exact; the only numerics live in the moments themselves. Coefficients
/// below prune_rel * (largest coefficient of the component) are dropped,
/// which removes the c_0-sized quadrature residue the vanishing moments
/// leave behind.
class ReducedField {
public:
  ReducedField(std::vector<SparsePoly> components, std::vector<double> abs_scales);

  /// Test-only convenience: wraps raw polynomial components.
  static ReducedField from_components(std::vector<SparsePoly> components);

  int dim() const { return static_cast<int>(components_.size()); }
  const std::vector<SparsePoly>& components() const { return components_; }
  const SparsePoly& component(int i) const { return components_[i]; }
  const std::vector<std::vector<SparsePoly>>& jacobian_polys() const { return jac_; }

  /// True when every coefficient cancelled below noise scale (e.g. harmonic
  /// profiles, whose spherical means vanish).
  bool identically_zero() const { return identically_zero_; }

  /// Largest |coefficient| * B^{|gamma|} sum over a box of radius B; used to
  /// scale zero tolerances.
  double eval_scale(double box_radius) const;

  std::vector<double> eval(std::span<const double> xi) const;

  /// Analytic Jacobian d L_i / d xi_j.
  std::vector<std::vector<double>> jacobian(std::span<const double> xi) const;

  int max_degree() const;

private:
  std::vector<SparsePoly> components_;
  std::vector<std::vector<SparsePoly>> jac_;
  std::vector<double> abs_scales_;
  bool identically_zero_ = false;
};

struct ReduceOptions {
  double prune_rel = 1e-7;  // relative pruning threshold on each component
  bool prune = true;
  // A component whose largest surviving coefficient is below
  // zero_field_rel * (absolute-value accumulation of its terms) is treated
  // as identically zero.
  double zero_field_rel = 1e-9;
};

/// Moment-factorized reduction for an arbitrary polynomial profile. Needs
/// every even monomial moment up to |gamma| <= deg(Q) - 1.
ReducedField reduce_field(const SparsePoly& q, const MomentTable& moments,
                          const ReduceOptions& opts = {});
ReducedField reduce_field(const Profile& profile, const MomentTable& moments,
                          const ReduceOptions& opts = {});

std::vector<double> field_eval(const ReducedField& field, std::span<const double> xi);
std::vector<std::vector<double>> field_jacobian(const ReducedField& field,
                                                std::span<const double> xi);

}  // namespace peakcount
