#include "peakcount/weight.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "peakcount/errors.hpp"
#include "peakcount/parallel.hpp"
#include "peakcount/quadrature.hpp"

namespace peakcount {

namespace {

double energy_density(double u, double du, double p) {
  return 0.5 * du * du + 0.5 * u * u - std::pow(u, p + 1.0) / (p + 1.0);
}

// Relative uncertainty of the far-field tail model: truncation of the
// 6-term asymptotic series plus the dropped nonlinearity.
double tail_model_uncertainty(const GroundState& gs) {
  int dim = gs.params().dim;
  double mu = static_cast<double>(dim - 2) * (dim - 2);
  double a = 1.0;
  for (int j = 1; j <= 7; ++j) a *= (mu - (2.0 * j - 1.0) * (2.0 * j - 1.0)) / (8.0 * j);
  double r = gs.truncation_radius();
  double series = std::fabs(a) / std::pow(r, 7.0);
  double nonlinear = std::pow(gs.eval(r).u, gs.params().p - 1.0);
  return 4.0 * (series + nonlinear);
}

struct WeightedRadialIntegral {
  double value;
  double error;
};

// int_0^inf w(r) r^k dr where w is either the energy density or U'^2.
WeightedRadialIntegral radial_integral(const RadialWeight& w, int k, bool du_squared,
                                       const MomentOptions& opts) {
  const GroundState& gs = w.ground_state();
  const double p = gs.params().p;
  const double r_end = gs.truncation_radius();

  auto main_integrand = [&](double r) {
    ProfileEval e = gs.eval(r);
    double base = du_squared ? e.du * e.du : energy_density(e.u, e.du, p);
    return base * std::pow(r, static_cast<double>(k));
  };

  AdaptiveOptions a;
  a.abs_tol = 0.5 * opts.quad_tol;
  a.rel_tol = 1e-12;
  a.max_panels = opts.max_panels;
  a.initial_panels = std::max<std::size_t>(64, static_cast<std::size_t>(k) * 4);
  QuadResult core = integrate_adaptive(main_integrand, 0.0, r_end, a);

  // Analytic tail correction from the far-field model. The integrand decays
  // like e^{-2r} r^k, so a window of width 80 + k/2 leaves nothing behind.
  auto tail_integrand = [&](double r) {
    double u = gs.tail_value(r);
    double du = gs.tail_derivative(r);
    double base = du_squared ? du * du : energy_density(u, du, p);
    return base * std::pow(r, static_cast<double>(k));
  };
  double tail_stop = r_end + 80.0 + 0.5 * static_cast<double>(k);
  AdaptiveOptions t;
  t.abs_tol = 0.25 * opts.quad_tol;
  t.rel_tol = 1e-12;
  t.max_panels = opts.max_panels;
  t.initial_panels = 64;
  QuadResult tail = integrate_adaptive(tail_integrand, r_end, tail_stop, t);

  double model_err = std::fabs(tail.value) * tail_model_uncertainty(gs);
  return {core.value + tail.value, core.error + tail.error + model_err};
}

void enumerate_even_multi_indices(int d, int max_order, std::vector<int>& current,
                                  std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == d) {
    out.push_back(current);
    return;
  }
  int used = 0;
  for (int v : current) used += v;
  for (int b = 0; used + b <= max_order; b += 2) {
    current.push_back(b);
    enumerate_even_multi_indices(d, max_order, current, out);
    current.pop_back();
  }
}

}  // namespace

double RadialWeight::operator()(double r) const {
  ProfileEval e = gs_->eval(r);
  return energy_density(e.u, e.du, gs_->params().p);
}

double RadialWeight::tail_density(double r) const {
  double u = gs_->tail_value(r);
  double du = gs_->tail_derivative(r);
  return energy_density(u, du, gs_->params().p);
}

double weight_eval(const RadialWeight& w, double r) { return w(r); }

double angular_factor(const std::vector<int>& beta) {
  int total = 0;
  for (int b : beta) {
    if (b < 0) throw InvalidParams("negative multi-index entry");
    if (b % 2 == 1) return 0.0;
    total += b;
  }
  int d = static_cast<int>(beta.size());
  double lg = 0.0;
  for (int b : beta) lg += std::lgamma(0.5 * (b + 1.0));
  lg -= std::lgamma(0.5 * (total + d));
  return 2.0 * std::exp(lg);
}

double radial_moment(const RadialWeight& w, int k, const MomentOptions& opts) {
  if (k < 0) throw InvalidParams("radial moment order must be >= 0");
  return radial_integral(w, k, false, opts).value;
}

MomentTable::MomentTable(const RadialWeight& w, int max_order, const MomentOptions& opts)
    : weight_(&w), d_(w.hyperplane_dim()), max_order_(std::max(max_order, 2)), opts_(opts) {
  if (d_ < 1)
    throw InvalidParams("moment table requires hyperplane dimension d = N-1 >= 1");
  if (max_order < 0) throw InvalidParams("max moment order must be >= 0");

  radial_max_ = max_order_ + d_ + 3;
  radial_.assign(radial_max_ + 1, 0.0);
  radial_err_.assign(radial_max_ + 1, 0.0);
  radial_du2_.assign(radial_max_ + 1, 0.0);

  // Independent integrals; element i < n covers e-weighted, the rest U'^2.
  std::size_t n = static_cast<std::size_t>(radial_max_) + 1;
  parallel_for(2 * n, [&](std::size_t task) {
    bool du2 = task >= n;
    int k = static_cast<int>(du2 ? task - n : task);
    WeightedRadialIntegral r = radial_integral(*weight_, k, du2, opts_);
    if (du2) {
      radial_du2_[k] = r.value;
    } else {
      radial_[k] = r.value;
      radial_err_[k] = r.error;
    }
  });

  std::vector<std::vector<int>> betas;
  std::vector<int> current;
  enumerate_even_multi_indices(d_, max_order_, current, betas);
  for (const auto& beta : betas) {
    int total = 0;
    for (int b : beta) total += b;
    monomial_[beta] = angular_factor(beta) * radial_[total + d_ - 1];
  }
}

double MomentTable::radial_moment(int k) const {
  if (k < 0 || k > radial_max_)
    throw MomentUnavailable("radial moment order " + std::to_string(k) +
                            " outside precomputed range [0, " +
                            std::to_string(radial_max_) + "]");
  return radial_[k];
}

double MomentTable::radial_moment_error(int k) const {
  if (k < 0 || k > radial_max_) throw MomentUnavailable("radial moment order out of range");
  return radial_err_[k];
}

double MomentTable::monomial_moment(const std::vector<int>& beta) const {
  if (static_cast<int>(beta.size()) != d_)
    throw DimensionMismatch("multi-index has " + std::to_string(beta.size()) +
                            " entries, moment table has d = " + std::to_string(d_));
  int total = 0;
  for (int b : beta) {
    if (b < 0) throw InvalidParams("negative multi-index entry");
    if (b % 2 == 1) return 0.0;  // odd symmetry, exact
    total += b;
  }
  if (total > max_order_)
    throw MomentUnavailable("monomial moment of order " + std::to_string(total) +
                            " above table max order " + std::to_string(max_order_));
  auto it = monomial_.find(beta);
  if (it == monomial_.end()) throw MomentUnavailable("moment not cached");
  return it->second;
}

double MomentTable::c_moment(int m) const {
  if (m < 0) throw InvalidParams("c moment order must be >= 0");
  if (m % 2 == 1) return 0.0;
  std::vector<int> beta(d_, 0);
  beta[0] = m;
  return monomial_moment(beta);
}

double MomentTable::c_moment_identity(int k) const {
  if (k < 0) throw InvalidParams("identity index must be >= 0");
  if (k == 0) return 0.0;  // the (1 - 1/(2k+1)) prefactor vanishes
  int radial_index = 2 * k + d_ - 1;
  if (radial_index > radial_max_)
    throw MomentUnavailable("identity route needs radial order " +
                            std::to_string(radial_index) + " above precomputed range");
  std::vector<int> beta(d_, 0);
  beta[0] = 2 * k + 2;
  double prefactor = 2.0 * k / (2.0 * k + 1.0);
  return prefactor * angular_factor(beta) * radial_du2_[radial_index];
}

double MomentTable::c_tol() const { return 1e-7 * std::fabs(c_moment(2)); }

double monomial_moment(const MomentTable& table, const std::vector<int>& beta) {
  return table.monomial_moment(beta);
}

double c_moment(const MomentTable& table, int m) { return table.c_moment(m); }

double c_moment_identity(const MomentTable& table, int k) {
  return table.c_moment_identity(k);
}

}  // namespace peakcount
