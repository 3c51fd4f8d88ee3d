#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peakcount/ground_state.hpp"
#include "peakcount/poly.hpp"
#include "peakcount/reduction.hpp"
#include "peakcount/weight.hpp"
#include "peakcount/zeros.hpp"

namespace peakcount {

enum class CurvatureVerdict {
  no_solution,    // m odd
  exactly_one,    // m even, m >= 2
  outside_scope,  // m = 0: the curvature does not vanish at the point
};

const char* to_string(CurvatureVerdict v);

/// Order analysis of a plane-curve profile psi with psi(0) = psi'(0) = 0:
/// n is the order of the first nonzero derivative of psi at 0, m = n - 2 the
/// order of the first nonzero derivative of the curvature.
struct CurvatureAnalysis {
  int n = 0;
  int m = 0;
  CurvatureVerdict verdict = CurvatureVerdict::outside_scope;
};

/// Throws DegeneratePsi when psi is identically zero; InvalidParams when
/// psi(0) != 0 or psi'(0) != 0.
CurvatureAnalysis curvature_order(const SparsePoly& psi);

/// Plane-curve curvature psi''(t) / (1 + psi'(t)^2)^{3/2}.
double mean_curvature_eval(const SparsePoly& psi, double t);

struct Tolerances {
  double quad_tol = 1e-10;
  double zero_tol = 1e-9;
  double det_tol = 1e-8;
  double flatness_tol = 1e-8;
  double box_radius = 0.0;  // 0 = automatic
  int grid_per_axis = 32;
  double prune_rel = 1e-7;
  SolverOptions solver;
};

struct RunConfig {
  double p = 2.0;
  int dim = 3;
  std::optional<SparsePoly> profile;  // d = dim - 1 variables
  std::optional<SparsePoly> psi;      // 1 variable, dim = 2 mode
  Tolerances tol;
  std::string json_path;
  std::string csv_path;
  int moments_max_order = -1;  // -1: derived from the profile degree
};

struct Conditions {
  bool flatness_holds = false;
  double min_grad_laplacian_norm = 0.0;
  bool all_nondegenerate = false;
  bool odd_monomial_shortcut = false;
  bool indeterminate_zeros_present = false;
  bool search_complete = false;
  bool field_identically_zero = false;
  bool finite_zero_hypothesis = true;  // false when the field vanishes identically
};

struct ClassificationReport {
  ProblemParams params;
  std::optional<Profile> profile;
  std::optional<SparsePoly> raw_profile;  // teo14-form inputs need not be homogeneous
  std::optional<CurvatureAnalysis> curvature;
  std::vector<double> c_values;           // c_0 .. c_max
  std::vector<double> identity_values;    // identity route, aligned on 2k
  std::optional<ZeroSet> zeros;
  std::vector<std::vector<double>> xi_set;  // stable-zero locations
  Conditions conditions;
  long count_lower_bound = 0;
  bool exact = false;
  long predicted_count = -1;  // -1 when only the lower bound is known
  std::string shortcut;       // "proposition_odd_monomial" when the shortcut fired
  std::vector<std::string> notes;
};

struct ClassifyOptions {
  /// Runs the reduction pipeline even when the odd-monomial shortcut already
  /// settles the count (used to cross-validate the two routes).
  bool force_full_pipeline = false;
};

/// Full pipeline: structural shortcut, ground state, moments, reduction,
/// zero search, condition checks, verdict. Errors are rethrown as StageError
/// with the failing stage name.
ClassificationReport classify_domain(const RunConfig& config,
                                     const ClassifyOptions& opts = {});

/// Cross-validation of the dim = 2 curvature route against the moment
/// reduction applied to the lowest-degree term of psi. Returns true when the
/// two verdicts agree (and, for even m, the pipeline finds the single stable
/// zero at 0).
bool crosscheck_1d(const SparsePoly& psi, double p,
                   const Tolerances& tol = {});

}  // namespace peakcount
