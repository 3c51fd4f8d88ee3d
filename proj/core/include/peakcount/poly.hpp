#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace peakcount {

/// Sparse multivariate polynomial with real coefficients. Terms are kept in
/// a canonically ordered map from exponent vectors; zero coefficients are
/// never stored. Immutable in spirit: operations return new values.
class SparsePoly {
public:
  SparsePoly() = default;
  explicit SparsePoly(int num_vars) : nvars_(num_vars) {}

  static SparsePoly monomial(std::vector<int> exponents, double coeff);
  static SparsePoly constant(int num_vars, double value);

  int num_vars() const { return nvars_; }
  const std::map<std::vector<int>, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  int degree() const;      // -1 for the zero polynomial
  int min_degree() const;  // lowest total degree present
  double max_abs_coeff() const;
  double coeff(const std::vector<int>& exponents) const;

  void add_term(const std::vector<int>& exponents, double coeff);

  double eval(std::span<const double> point) const;
  SparsePoly derivative(int var) const;
  std::vector<SparsePoly> gradient() const;
  SparsePoly laplacian() const;

  SparsePoly operator+(const SparsePoly& other) const;
  SparsePoly operator-(const SparsePoly& other) const;
  SparsePoly operator*(const SparsePoly& other) const;
  SparsePoly scaled(double factor) const;

  /// Composition with a linear map: result(x) = this(A x), A given row-major
  /// (entry [i][j] multiplies x_j in the i-th input variable).
  SparsePoly substitute_linear(const std::vector<std::vector<double>>& a) const;

  /// Drops coefficients below threshold_rel * max |coeff|.
  SparsePoly pruned(double threshold_rel) const;

  std::string to_string() const;

private:
  int nvars_ = 0;
  std::map<std::vector<int>, double> terms_;
};

/// Gradient of a polynomial evaluated at a point.
std::vector<double> poly_grad_eval(const SparsePoly& p, std::span<const double> point);

/// Homogeneous boundary profile Q of degree alpha + 1, alpha >= 3.
struct Profile {
  SparsePoly q;
  int alpha = 0;
};

/// Checks that every monomial of q shares the total degree alpha + 1 with
/// alpha >= 3, and spot-checks the scaling Q(t x) = t^{alpha+1} Q(x) at
/// pseudo-random points. Throws NotHomogeneous / DegreeTooLow.
Profile validate_profile(const SparsePoly& q);

struct SphereSampling {
  int angular_samples = 4096;    // d = 2: uniform angles
  int lattice_samples = 8192;    // d >= 3: Fibonacci lattice
  int refine_candidates = 8;
  int refine_iterations = 80;
};

struct FlatnessResult {
  bool holds = false;
  double min_grad_laplacian_norm = 0.0;
  std::vector<double> argmin;
  double tolerance = 0.0;
};

/// Verifies grad(Lap Q) != 0 on the unit sphere of the profile variables by
/// dense sampling with local refinement. holds is measured against
/// flatness_tol_rel * (max coefficient magnitude of grad Lap Q).
FlatnessResult check_flatness_condition(const Profile& profile,
                                        const SphereSampling& sampling = {},
                                        double flatness_tol_rel = 1e-8);

struct OddMonomialForm {
  bool applies = false;           // Q = sum_j a_j y_j^{alpha_j}, alpha_j >= 3
  std::vector<int> odd_axes;      // 1-based axes with odd alpha_j
  std::vector<int> exponents;     // per axis, 0 when absent
};

/// Structural test for the pure axis-monomial form (at most one monomial per
/// axis, every exponent an integer >= 3). Non-existence shortcut when any
/// exponent is odd.
OddMonomialForm detect_odd_monomial_form(const SparsePoly& q);

}  // namespace peakcount
