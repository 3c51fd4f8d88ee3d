#include "peakcount/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "peakcount/errors.hpp"

namespace peakcount {

namespace {

// Exact binomial coefficients as doubles (exponents here stay far below the
// 2^53 exactness limit).
double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

ReducedField::ReducedField(std::vector<SparsePoly> components,
                           std::vector<double> abs_scales)
    : components_(std::move(components)), abs_scales_(std::move(abs_scales)) {
  identically_zero_ = true;
  for (const auto& c : components_)
    if (!c.is_zero()) identically_zero_ = false;
  const int d = dim();
  jac_.resize(d);
  for (int i = 0; i < d; ++i) {
    jac_[i].reserve(d);
    for (int j = 0; j < d; ++j) jac_[i].push_back(components_[i].derivative(j));
  }
}

ReducedField ReducedField::from_components(std::vector<SparsePoly> components) {
  std::vector<double> scales;
  for (const auto& c : components) scales.push_back(c.max_abs_coeff());
  return ReducedField(std::move(components), std::move(scales));
}

double ReducedField::eval_scale(double box_radius) const {
  double b = std::max(1.0, box_radius);
  double scale = 0.0;
  for (const auto& comp : components_) {
    double s = 0.0;
    for (const auto& [e, c] : comp.terms()) {
      int total = 0;
      for (int v : e) total += v;
      s += std::fabs(c) * std::pow(b, total);
    }
    scale = std::max(scale, s);
  }
  if (scale == 0.0)
    for (double s : abs_scales_) scale = std::max(scale, s);
  return std::max(scale, 1e-300);
}

std::vector<double> ReducedField::eval(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != dim())
    throw DimensionMismatch("field evaluation point has wrong dimension");
  std::vector<double> out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = components_[i].eval(xi);
  return out;
}

std::vector<std::vector<double>> ReducedField::jacobian(std::span<const double> xi) const {
  if (static_cast<int>(xi.size()) != dim())
    throw DimensionMismatch("Jacobian point has wrong dimension");
  std::vector<std::vector<double>> out(dim(), std::vector<double>(dim()));
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) out[i][j] = jac_[i][j].eval(xi);
  return out;
}

int ReducedField::max_degree() const {
  int d = -1;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

ReducedField reduce_field(const SparsePoly& q, const MomentTable& moments,
                          const ReduceOptions& opts) {
  const int d = q.num_vars();
  if (d != moments.dim())
    throw DimensionMismatch("profile has " + std::to_string(d) +
                            " variables, moment table has d = " +
                            std::to_string(moments.dim()));
  int needed = std::max(0, q.degree() - 1);
  if (needed > moments.max_order())
    throw MomentUnavailable("reduction needs moments up to order " +
                            std::to_string(needed) + ", table holds " +
                            std::to_string(moments.max_order()));

  std::vector<SparsePoly> components;
  std::vector<double> abs_scales;
  components.reserve(d);
  for (int i = 0; i < d; ++i) {
    SparsePoly partial = q.derivative(i);
    SparsePoly acc(d);
    double abs_scale = 0.0;
    for (const auto& [e, c] : partial.terms()) {
      // Enumerate even gamma <= e componentwise.
      std::vector<int> gamma(d, 0);
      for (;;) {
        double w = 1.0;
        for (int j = 0; j < d; ++j) w *= binom(e[j], gamma[j]);
        double m = moments.monomial_moment(gamma);
        if (m != 0.0) {
          std::vector<int> rest(d);
          for (int j = 0; j < d; ++j) rest[j] = e[j] - gamma[j];
          acc.add_term(rest, c * w * m);
          abs_scale += std::fabs(c * w * m);
        }
        // Next even multi-index below e.
        int j = 0;
        for (; j < d; ++j) {
          gamma[j] += 2;
          if (gamma[j] <= e[j]) break;
          gamma[j] = 0;
        }
        if (j == d) break;
      }
    }
    components.push_back(acc);
    abs_scales.push_back(abs_scale);
  }

  // Noise handling: a component whose surviving coefficients all sit at the
  // cancellation floor is an exact zero (harmonic profiles); otherwise prune
  // the c_0-sized residue relative to the leading coefficient.
  for (int i = 0; i < d; ++i) {
    if (components[i].max_abs_coeff() <= opts.zero_field_rel * abs_scales[i]) {
      components[i] = SparsePoly(d);
    } else if (opts.prune) {
      components[i] = components[i].pruned(opts.prune_rel);
    }
  }
  return ReducedField(std::move(components), std::move(abs_scales));
}

ReducedField reduce_field(const Profile& profile, const MomentTable& moments,
                          const ReduceOptions& opts) {
  return reduce_field(profile.q, moments, opts);
}

std::vector<double> field_eval(const ReducedField& field, std::span<const double> xi) {
  return field.eval(xi);
}

std::vector<std::vector<double>> field_jacobian(const ReducedField& field,
                                                std::span<const double> xi) {
  return field.jacobian(xi);
}

}  // namespace peakcount
