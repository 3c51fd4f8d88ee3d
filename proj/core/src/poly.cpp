#include "peakcount/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "peakcount/errors.hpp"

namespace peakcount {

namespace {

constexpr double kCanonicalEps = 0.0;  // exact zero drops only; pruning is explicit

int total_degree(const std::vector<int>& e) {
  int d = 0;
  for (int v : e) d += v;
  return d;
}

// Small deterministic PRNG for spot checks (xorshift64*).
struct SpotRng {
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  double uniform() {
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return static_cast<double>((state * 0x2545f4914f6cdd1dull) >> 11) /
           static_cast<double>(1ull << 53);
  }
  double symmetric() { return 2.0 * uniform() - 1.0; }
};

}  // namespace

SparsePoly SparsePoly::monomial(std::vector<int> exponents, double coeff) {
  SparsePoly p(static_cast<int>(exponents.size()));
  p.add_term(exponents, coeff);
  return p;
}

SparsePoly SparsePoly::constant(int num_vars, double value) {
  SparsePoly p(num_vars);
  p.add_term(std::vector<int>(num_vars, 0), value);
  return p;
}

int SparsePoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

int SparsePoly::min_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int t = total_degree(e);
    if (d < 0 || t < d) d = t;
  }
  return d;
}

double SparsePoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::fabs(c));
  return m;
}

double SparsePoly::coeff(const std::vector<int>& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? 0.0 : it->second;
}

void SparsePoly::add_term(const std::vector<int>& exponents, double coeff) {
  if (static_cast<int>(exponents.size()) != nvars_)
    throw DimensionMismatch("exponent vector length does not match num_vars");
  for (int e : exponents)
    if (e < 0) throw InvalidParams("negative exponent");
  auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    if (coeff != 0.0) terms_.emplace(exponents, coeff);
  } else {
    it->second += coeff;
    if (std::fabs(it->second) <= kCanonicalEps) terms_.erase(it);
  }
}

double SparsePoly::eval(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw DimensionMismatch("evaluation point has wrong dimension");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int j = 0; j < nvars_; ++j)
      for (int k = 0; k < e[j]; ++k) t *= point[j];
    sum += t;
  }
  return sum;
}

SparsePoly SparsePoly::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw DimensionMismatch("derivative variable out of range");
  SparsePoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    std::vector<int> d = e;
    d[var] -= 1;
    out.add_term(d, c * e[var]);
  }
  return out;
}

std::vector<SparsePoly> SparsePoly::gradient() const {
  std::vector<SparsePoly> g;
  g.reserve(nvars_);
  for (int j = 0; j < nvars_; ++j) g.push_back(derivative(j));
  return g;
}

SparsePoly SparsePoly::laplacian() const {
  SparsePoly out(nvars_);
  for (int j = 0; j < nvars_; ++j) {
    SparsePoly second = derivative(j).derivative(j);
    for (const auto& [e, c] : second.terms_) out.add_term(e, c);
  }
  return out;
}

SparsePoly SparsePoly::operator+(const SparsePoly& other) const {
  if (other.nvars_ != nvars_) throw DimensionMismatch("adding polynomials of different arity");
  SparsePoly out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, c);
  return out;
}

SparsePoly SparsePoly::operator-(const SparsePoly& other) const {
  return *this + other.scaled(-1.0);
}

SparsePoly SparsePoly::operator*(const SparsePoly& other) const {
  if (other.nvars_ != nvars_)
    throw DimensionMismatch("multiplying polynomials of different arity");
  SparsePoly out(nvars_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : other.terms_) {
      std::vector<int> e(nvars_);
      for (int j = 0; j < nvars_; ++j) e[j] = e1[j] + e2[j];
      out.add_term(e, c1 * c2);
    }
  }
  return out;
}

SparsePoly SparsePoly::scaled(double factor) const {
  SparsePoly out(nvars_);
  if (factor == 0.0) return out;
  for (const auto& [e, c] : terms_) out.add_term(e, c * factor);
  return out;
}

SparsePoly SparsePoly::substitute_linear(const std::vector<std::vector<double>>& a) const {
  if (static_cast<int>(a.size()) != nvars_)
    throw DimensionMismatch("linear substitution has wrong row count");
  int out_vars = nvars_ == 0 ? 0 : static_cast<int>(a[0].size());
  // Linear forms L_i(x) = sum_j a[i][j] x_j as polynomials.
  std::vector<SparsePoly> forms;
  for (int i = 0; i < nvars_; ++i) {
    SparsePoly li(out_vars);
    for (int j = 0; j < out_vars; ++j) {
      std::vector<int> e(out_vars, 0);
      e[j] = 1;
      li.add_term(e, a[i][j]);
    }
    forms.push_back(li);
  }
  SparsePoly out(out_vars);
  for (const auto& [e, c] : terms_) {
    SparsePoly term = SparsePoly::constant(out_vars, c);
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) term = term * forms[i];
    out = out + term;
  }
  return out;
}

SparsePoly SparsePoly::pruned(double threshold_rel) const {
  double cutoff = threshold_rel * max_abs_coeff();
  SparsePoly out(nvars_);
  for (const auto& [e, c] : terms_)
    if (std::fabs(c) > cutoff) out.add_term(e, c);
  return out;
}

std::string SparsePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << (c >= 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    os << std::fabs(c);
    for (int j = 0; j < nvars_; ++j) {
      if (e[j] == 0) continue;
      os << "*y" << (j + 1);
      if (e[j] > 1) os << "^" << e[j];
    }
    first = false;
  }
  return os.str();
}

std::vector<double> poly_grad_eval(const SparsePoly& p, std::span<const double> point) {
  std::vector<double> g(p.num_vars());
  for (int j = 0; j < p.num_vars(); ++j) g[j] = p.derivative(j).eval(point);
  return g;
}

Profile validate_profile(const SparsePoly& q) {
  if (q.is_zero()) throw InvalidParams("profile polynomial is identically zero");
  int deg = q.degree();
  for (const auto& [e, c] : q.terms()) {
    int t = 0;
    for (int v : e) t += v;
    if (t != deg)
      throw NotHomogeneous("profile mixes total degrees " + std::to_string(t) +
                           " and " + std::to_string(deg));
  }
  int alpha = deg - 1;
  if (alpha < 3)
    throw DegreeTooLow("homogeneity exponent alpha = " + std::to_string(alpha) +
                       " violates alpha >= 3");

  // Guard against representation bugs: Q(t x) = t^{alpha+1} Q(x).
  SpotRng rng;
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<double> x(q.num_vars());
    for (auto& xi : x) xi = rng.symmetric();
    double t = 0.5 + rng.uniform();
    std::vector<double> tx(x);
    for (auto& xi : tx) xi *= t;
    double lhs = q.eval(tx);
    double rhs = std::pow(t, alpha + 1) * q.eval(x);
    double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    if (std::fabs(lhs - rhs) > 1e-12 * scale)
      throw NotHomogeneous("scaling spot-check failed");
  }
  return Profile{q, alpha};
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// |grad Lap Q| at a point of S^{d-1}.
struct SphereObjective {
  const std::vector<SparsePoly>* grad_lap;
  double operator()(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& g : *grad_lap) {
      double v = g.eval(x);
      s += v * v;
    }
    return std::sqrt(s);
  }
};

// Golden-section minimization of f on [a, b].
template <typename F>
double golden_min(F f, double a, double b, int iters, double* arg) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  *arg = 0.5 * (a + b);
  return f(*arg);
}

}  // namespace

FlatnessResult check_flatness_condition(const Profile& profile,
                                        const SphereSampling& sampling,
                                        double flatness_tol_rel) {
  const int d = profile.q.num_vars();
  std::vector<SparsePoly> grad_lap = profile.q.laplacian().gradient();

  double coeff_scale = 0.0;
  for (const auto& g : grad_lap) coeff_scale = std::max(coeff_scale, g.max_abs_coeff());
  FlatnessResult res;
  res.tolerance = flatness_tol_rel * coeff_scale;

  SphereObjective obj{&grad_lap};

  if (d == 1) {
    // S^0 = {-1, +1}; the condition reads Q''' != 0 there.
    double left[1] = {-1.0}, right[1] = {1.0};
    double fl = obj(left), fr = obj(right);
    res.min_grad_laplacian_norm = std::min(fl, fr);
    res.argmin = {fl <= fr ? -1.0 : 1.0};
  } else if (d == 2) {
    auto at_angle = [&](double theta) {
      double x[2] = {std::cos(theta), std::sin(theta)};
      return obj(x);
    };
    int n = sampling.angular_samples;
    std::vector<std::pair<double, double>> samples;  // (value, angle)
    samples.reserve(n);
    for (int i = 0; i < n; ++i) {
      double theta = 2.0 * M_PI * i / n;
      samples.emplace_back(at_angle(theta), theta);
    }
    std::sort(samples.begin(), samples.end());
    double best = samples[0].first, best_theta = samples[0].second;
    double width = 2.0 * M_PI / n;
    int cands = std::min<int>(sampling.refine_candidates, n);
    for (int i = 0; i < cands; ++i) {
      double arg;
      double v = golden_min(at_angle, samples[i].second - width,
                            samples[i].second + width, sampling.refine_iterations, &arg);
      if (v < best) {
        best = v;
        best_theta = arg;
      }
    }
    res.min_grad_laplacian_norm = best;
    res.argmin = {std::cos(best_theta), std::sin(best_theta)};
  } else {
    // Fibonacci-style lattice plus projected-gradient descent refinement.
    SpotRng rng;
    std::vector<std::vector<double>> pts;
    int n = sampling.lattice_samples;
    if (d == 3) {
      const double ga = M_PI * (3.0 - std::sqrt(5.0));
      for (int i = 0; i < n; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / n;
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = ga * i;
        pts.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
      }
    } else {
      for (int i = 0; i < n; ++i) {
        std::vector<double> x(d);
        double nn = 0.0;
        for (auto& xi : x) {
          // Box-Muller for a rotation-invariant direction sample.
          double u1 = std::max(1e-12, rng.uniform()), u2 = rng.uniform();
          xi = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
          nn += xi * xi;
        }
        nn = std::sqrt(nn);
        for (auto& xi : x) xi /= std::max(nn, 1e-12);
        pts.push_back(x);
      }
    }
    double best = -1.0;
    std::vector<double> best_x;
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < pts.size(); ++i) ranked.emplace_back(obj(pts[i]), i);
    std::sort(ranked.begin(), ranked.end());
    int cands = std::min<std::size_t>(sampling.refine_candidates, ranked.size());
    for (int c = 0; c < cands; ++c) {
      std::vector<double> x = pts[ranked[c].second];
      double fx = ranked[c].first;
      double step = 0.05;
      for (int it = 0; it < sampling.refine_iterations; ++it) {
        // Numeric tangential gradient of the objective.
        std::vector<double> g(d, 0.0);
        const double eps = 1e-6;
        for (int j = 0; j < d; ++j) {
          std::vector<double> xp = x, xm = x;
          xp[j] += eps;
          xm[j] -= eps;
          double np = norm2(xp), nm = norm2(xm);
          for (auto& v : xp) v /= np;
          for (auto& v : xm) v /= nm;
          g[j] = (obj(xp) - obj(xm)) / (2 * eps);
        }
        std::vector<double> xn(d);
        for (int j = 0; j < d; ++j) xn[j] = x[j] - step * g[j];
        double nn = norm2(xn);
        for (auto& v : xn) v /= std::max(nn, 1e-12);
        double fn = obj(xn);
        if (fn < fx) {
          x = xn;
          fx = fn;
          step *= 1.2;
        } else {
          step *= 0.5;
        }
      }
      if (best < 0.0 || fx < best) {
        best = fx;
        best_x = x;
      }
    }
    res.min_grad_laplacian_norm = best;
    res.argmin = best_x;
  }

  res.holds = res.min_grad_laplacian_norm > res.tolerance;
  return res;
}

OddMonomialForm detect_odd_monomial_form(const SparsePoly& q) {
  OddMonomialForm out;
  const int d = q.num_vars();
  out.exponents.assign(d, 0);
  if (q.is_zero()) return out;
  for (const auto& [e, c] : q.terms()) {
    int axis = -1;
    for (int j = 0; j < d; ++j) {
      if (e[j] > 0) {
        if (axis >= 0) return out;  // cross term
        axis = j;
      }
    }
    if (axis < 0) return out;            // constant term
    if (e[axis] < 3) return out;         // below the alpha_j >= 3 hypothesis
    if (out.exponents[axis] != 0) return out;  // two monomials on one axis
    out.exponents[axis] = e[axis];
  }
  out.applies = true;
  for (int j = 0; j < d; ++j)
    if (out.exponents[j] % 2 == 1) out.odd_axes.push_back(j + 1);
  return out;
}

}  // namespace peakcount
