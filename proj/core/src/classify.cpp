#include "peakcount/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "peakcount/errors.hpp"

namespace peakcount {

namespace {

template <typename Fn>
auto run_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
}

SparsePoly leading_term_1d(const SparsePoly& psi) {
  int n = psi.min_degree();
  SparsePoly out(1);
  out.add_term({n}, psi.coeff({n}));
  return out;
}

ZeroFindOptions zero_options(const Tolerances& tol) {
  ZeroFindOptions z;
  z.box_radius = tol.box_radius;
  z.grid_per_axis = tol.grid_per_axis;
  z.zero_tol_rel = tol.zero_tol;
  z.det_tol = tol.det_tol;
  return z;
}

struct PipelineArtifacts {
  GroundState gs;
  std::vector<double> c_values;
  std::vector<double> identity_values;
  ReducedField field;
  ZeroSet zeros;
  FlatnessResult flatness;
};

PipelineArtifacts run_reduction_pipeline(const ProblemParams& params, const SparsePoly& q,
                                         const Tolerances& tol, int moments_max_order) {
  GroundState gs = run_stage("ground_state", [&] {
    return solve_ground_state(params, tol.solver);
  });

  int needed = std::max(2, q.degree() - 1);
  int max_order = std::max(needed, moments_max_order);
  RadialWeight weight(gs);
  MomentOptions mopts;
  mopts.quad_tol = tol.quad_tol;
  MomentTable table = run_stage("moments", [&] {
    return MomentTable(weight, max_order, mopts);
  });

  std::vector<double> c_values, identity_values;
  for (int m = 0; m <= table.max_order(); ++m) c_values.push_back(table.c_moment(m));
  for (int k = 0; 2 * k <= table.max_order(); ++k)
    identity_values.push_back(table.c_moment_identity(k));

  ReduceOptions ropts;
  ropts.prune_rel = tol.prune_rel;
  ReducedField field = run_stage("reduce", [&] { return reduce_field(q, table, ropts); });

  ZeroSet zeros = run_stage("zeros", [&] { return find_zeros(field, zero_options(tol)); });

  FlatnessResult flatness = run_stage("flatness", [&] {
    Profile raw{q, std::max(q.degree() - 1, 0)};
    return check_flatness_condition(raw, SphereSampling{}, tol.flatness_tol);
  });

  return PipelineArtifacts{std::move(gs), std::move(c_values), std::move(identity_values),
                           std::move(field), std::move(zeros), std::move(flatness)};
}

void fill_from_zero_set(ClassificationReport& rep, const ZeroSet& zeros) {
  rep.conditions.search_complete = zeros.completeness == "complete";
  rep.conditions.field_identically_zero = zeros.field_identically_zero;
  rep.conditions.finite_zero_hypothesis = !zeros.field_identically_zero;
  rep.conditions.indeterminate_zeros_present = zeros.any_indeterminate();
  rep.conditions.all_nondegenerate = true;
  for (const auto& z : zeros.zeros)
    if (z.classification != ZeroClass::nondegenerate_stable)
      rep.conditions.all_nondegenerate = false;
  for (const auto& z : zeros.zeros)
    if (z.stable()) rep.xi_set.push_back(z.location);
  rep.count_lower_bound = static_cast<long>(zeros.stable_count());
}

}  // namespace

const char* to_string(CurvatureVerdict v) {
  switch (v) {
    case CurvatureVerdict::no_solution: return "no_solution";
    case CurvatureVerdict::exactly_one: return "exactly_one";
    case CurvatureVerdict::outside_scope: return "outside_scope";
  }
  return "outside_scope";
}

CurvatureAnalysis curvature_order(const SparsePoly& psi) {
  if (psi.num_vars() != 1) throw DimensionMismatch("psi must be a 1-variable polynomial");
  if (psi.is_zero()) throw DegeneratePsi("psi is identically zero");
  if (psi.coeff({0}) != 0.0 || psi.coeff({1}) != 0.0)
    throw InvalidParams("psi must satisfy psi(0) = psi'(0) = 0");
  CurvatureAnalysis out;
  out.n = psi.min_degree();
  out.m = out.n - 2;
  if (out.m == 0)
    out.verdict = CurvatureVerdict::outside_scope;  // curvature nonzero at the point
  else if (out.m % 2 == 1)
    out.verdict = CurvatureVerdict::no_solution;
  else
    out.verdict = CurvatureVerdict::exactly_one;
  return out;
}

double mean_curvature_eval(const SparsePoly& psi, double t) {
  if (psi.num_vars() != 1) throw DimensionMismatch("psi must be a 1-variable polynomial");
  double point[1] = {t};
  double d1 = psi.derivative(0).eval(point);
  double d2 = psi.derivative(0).derivative(0).eval(point);
  return d2 / std::pow(1.0 + d1 * d1, 1.5);
}

bool crosscheck_1d(const SparsePoly& psi, double p, const Tolerances& tol) {
  CurvatureAnalysis ca = curvature_order(psi);
  if (ca.verdict == CurvatureVerdict::outside_scope)
    throw InvalidParams("crosscheck requires a vanishing-curvature profile (n >= 3)");

  SparsePoly lead = leading_term_1d(psi);
  PipelineArtifacts art =
      run_reduction_pipeline(ProblemParams{p, 2}, lead, tol, -1);

  std::size_t stable = art.zeros.stable_count();
  if (ca.verdict == CurvatureVerdict::no_solution)
    return stable == 0 && art.zeros.zeros.empty();

  // exactly_one: a single stable zero at the origin with L'(0) != 0.
  if (stable != 1 || art.zeros.zeros.size() != 1) return false;
  const ZeroRecord& z = art.zeros.zeros[0];
  bool at_origin = std::fabs(z.location[0]) <= 1e-6 * std::max(1.0, art.zeros.search_box);
  bool slope_nonzero = z.classification == ZeroClass::nondegenerate_stable;
  return at_origin && slope_nonzero;
}

ClassificationReport classify_domain(const RunConfig& config, const ClassifyOptions& opts) {
  ClassificationReport rep;
  rep.params = ProblemParams{config.p, config.dim};
  run_stage("params", [&] {
    rep.params.validate();
    if (config.profile.has_value() == config.psi.has_value())
      throw ValidationError("exactly one of profile / psi must be given");
    if (config.psi && config.dim != 2)
      throw ValidationError("psi mode requires dim = 2");
    if (config.dim < 2)
      throw ValidationError("domain analysis requires dim >= 2");
    return 0;
  });

  if (config.psi) {
    // Plane-domain route: curvature order decides, the reduction pipeline on
    // the lowest-degree term cross-validates.
    CurvatureAnalysis ca = run_stage("curvature", [&] { return curvature_order(*config.psi); });
    rep.curvature = ca;
    rep.raw_profile = config.psi;
    if (ca.verdict == CurvatureVerdict::outside_scope) {
      rep.exact = false;
      rep.predicted_count = -1;
      rep.count_lower_bound = 0;
      rep.notes.push_back(
          "curvature is nonzero at the point (m = 0); outside the vanishing-curvature "
          "theorem's scope");
      return rep;
    }
    SparsePoly lead = leading_term_1d(*config.psi);
    PipelineArtifacts art = run_reduction_pipeline(rep.params, lead, config.tol,
                                                   config.moments_max_order);
    rep.c_values = std::move(art.c_values);
    rep.identity_values = std::move(art.identity_values);
    rep.zeros = art.zeros;
    fill_from_zero_set(rep, art.zeros);
    rep.conditions.flatness_holds = art.flatness.holds;
    rep.conditions.min_grad_laplacian_norm = art.flatness.min_grad_laplacian_norm;

    long theorem_count = ca.verdict == CurvatureVerdict::no_solution ? 0 : 1;
    if (rep.count_lower_bound != theorem_count) {
      rep.exact = false;
      rep.predicted_count = -1;
      rep.notes.push_back("curvature verdict and reduction pipeline disagree");
      return rep;
    }
    rep.exact = true;
    rep.predicted_count = theorem_count;
    return rep;
  }

  // General route.
  const SparsePoly& q = *config.profile;
  run_stage("profile", [&] {
    if (q.num_vars() != config.dim - 1)
      throw DimensionMismatch("profile has " + std::to_string(q.num_vars()) +
                              " variables; expected dim - 1 = " +
                              std::to_string(config.dim - 1));
    return 0;
  });
  rep.raw_profile = q;

  OddMonomialForm odd = run_stage("structure", [&] { return detect_odd_monomial_form(q); });
  bool shortcut_fires = odd.applies && !odd.odd_axes.empty();
  rep.conditions.odd_monomial_shortcut = shortcut_fires;

  if (shortcut_fires && !opts.force_full_pipeline) {
    rep.shortcut = "proposition_odd_monomial";
    rep.exact = true;
    rep.predicted_count = 0;
    rep.count_lower_bound = 0;
    // The pure axis form has grad Lap Q != 0 everywhere on the sphere.
    FlatnessResult fl = run_stage("flatness", [&] {
      Profile raw{q, std::max(q.degree() - 1, 0)};
      return check_flatness_condition(raw, SphereSampling{}, config.tol.flatness_tol);
    });
    rep.conditions.flatness_holds = fl.holds;
    rep.conditions.min_grad_laplacian_norm = fl.min_grad_laplacian_norm;
    rep.conditions.all_nondegenerate = true;  // vacuous: no zeros exist
    rep.conditions.search_complete = true;
    rep.notes.push_back("odd axis-monomial exponent: a field component is bounded away "
                        "from zero, so no stable zero exists");
    return rep;
  }

  if (!shortcut_fires) {
    // The homogeneity gate applies on the main route.
    Profile prof = run_stage("profile", [&] { return validate_profile(q); });
    rep.profile = prof;
  }

  PipelineArtifacts art =
      run_reduction_pipeline(rep.params, q, config.tol, config.moments_max_order);
  rep.c_values = std::move(art.c_values);
  rep.identity_values = std::move(art.identity_values);
  rep.zeros = art.zeros;
  fill_from_zero_set(rep, art.zeros);
  rep.conditions.flatness_holds = art.flatness.holds;
  rep.conditions.min_grad_laplacian_norm = art.flatness.min_grad_laplacian_norm;

  if (art.zeros.field_identically_zero)
    rep.notes.push_back("reduced field vanishes identically (spherical means of the "
                        "profile are zero); no zero is isolated and the finite-zero-set "
                        "hypothesis fails");
  if (!rep.conditions.search_complete)
    rep.notes.push_back("zero search is heuristic: the top-degree part of the field "
                        "vanishes somewhere on the sphere");

  if (shortcut_fires) {
    rep.shortcut = "proposition_odd_monomial";
    rep.exact = true;
    rep.predicted_count = 0;
    if (rep.count_lower_bound != 0)
      throw StageError("verdict", "odd-monomial shortcut contradicts the zero search");
    return rep;
  }

  rep.exact = rep.conditions.flatness_holds && rep.conditions.all_nondegenerate &&
              !rep.conditions.indeterminate_zeros_present &&
              rep.conditions.search_complete && rep.conditions.finite_zero_hypothesis;
  rep.predicted_count = rep.exact ? rep.count_lower_bound : -1;

  // dim = 2 profiles also admit the curvature route; record the agreement.
  if (config.dim == 2 && q.min_degree() >= 2) {
    CurvatureAnalysis ca = curvature_order(q);
    rep.curvature = ca;
    long theorem_count = -1;
    if (ca.verdict == CurvatureVerdict::no_solution) theorem_count = 0;
    if (ca.verdict == CurvatureVerdict::exactly_one) theorem_count = 1;
    if (theorem_count >= 0 && rep.exact && theorem_count != rep.predicted_count)
      rep.notes.push_back("curvature verdict and reduction pipeline disagree");
  }
  return rep;
}

}  // namespace peakcount
