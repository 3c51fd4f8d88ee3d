#include "peakcount/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "peakcount/errors.hpp"
#include "peakcount/parallel.hpp"

namespace peakcount {

namespace {

double vec_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double determinant(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (n == 3)
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  throw InvalidParams("zero search supports d <= 3");
}

// Solve m x = b by Gaussian elimination with partial pivoting (n <= 3).
bool solve_linear(std::vector<std::vector<double>> m, std::vector<double> b,
                  std::vector<double>& x) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    if (std::fabs(m[piv][col]) < 1e-300) return false;
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t rr = n; rr-- > 0;) {
    double s = b[rr];
    for (std::size_t c = rr + 1; c < n; ++c) s -= m[rr][c] * x[c];
    x[rr] = s / m[rr][rr];
  }
  return true;
}

struct NewtonResult {
  bool converged = false;
  std::vector<double> x;
  double residual = 0.0;
};

NewtonResult newton_polish(const ReducedField& field, std::vector<double> x,
                           double tol_abs, int max_iter) {
  NewtonResult out;
  double f0 = vec_norm(field.eval(x));
  for (int it = 0; it < max_iter; ++it) {
    if (f0 <= tol_abs) break;
    auto J = field.jacobian(x);
    auto F = field.eval(x);
    std::vector<double> step;
    if (!solve_linear(J, F, step)) {
      // Levenberg fallback for singular Jacobians.
      double jscale = 0.0;
      for (const auto& row : J)
        for (double v : row) jscale = std::max(jscale, std::fabs(v));
      double lambda = std::max(1e-12, 1e-8 * jscale);
      bool solved = false;
      for (int k = 0; k < 20 && !solved; ++k, lambda *= 10.0) {
        auto Jl = J;
        for (std::size_t i = 0; i < Jl.size(); ++i) Jl[i][i] += lambda;
        solved = solve_linear(Jl, F, step);
      }
      if (!solved) break;
    }
    double scale = 1.0;
    bool moved = false;
    for (int half = 0; half < 16 && !moved; ++half) {
      std::vector<double> xn(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) xn[i] = x[i] - scale * step[i];
      double fn = vec_norm(field.eval(xn));
      if (fn < f0) {
        x = xn;
        f0 = fn;
        moved = true;
      }
      scale *= 0.5;
    }
    if (!moved) break;
  }
  out.converged = f0 <= tol_abs;
  out.x = std::move(x);
  out.residual = f0;
  return out;
}

// Minimum of |H(w)| over the unit sphere, by dense sampling with a touch of
// local refinement; H is the vector of top-degree homogeneous parts.
double min_norm_on_sphere(const std::vector<SparsePoly>& h, int d) {
  auto norm_at = [&](std::span<const double> x) {
    double s = 0.0;
    for (const auto& c : h) {
      double v = c.eval(x);
      s += v * v;
    }
    return std::sqrt(s);
  };
  if (d == 1) {
    double a[1] = {1.0}, b[1] = {-1.0};
    return std::min(norm_at(a), norm_at(b));
  }
  if (d == 2) {
    int n = 2048;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      double t = 2.0 * M_PI * i / n;
      double x[2] = {std::cos(t), std::sin(t)};
      double v = norm_at(x);
      if (best < 0 || v < best) best = v;
    }
    return best;
  }
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  int n = 4096;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    double x[3] = {rho * std::cos(ga * i), rho * std::sin(ga * i), z};
    double v = norm_at(x);
    if (best < 0 || v < best) best = v;
  }
  return best;
}

struct Completeness {
  bool certified = false;
  double radius = -1.0;
};

// If the top-degree part of L never vanishes on the sphere, |L| -> infinity
// radially and all zeros lie inside a computable radius.
Completeness certified_zero_bound(const ReducedField& field) {
  Completeness out;
  int h = field.max_degree();
  if (h <= 0) return out;
  const int d = field.dim();
  std::vector<SparsePoly> top;
  double top_scale = 0.0;
  for (const auto& comp : field.components()) {
    SparsePoly t(d);
    for (const auto& [e, c] : comp.terms()) {
      int total = 0;
      for (int v : e) total += v;
      if (total == h) t.add_term(e, c);
    }
    top_scale = std::max(top_scale, t.max_abs_coeff());
    top.push_back(t);
  }
  double mu = min_norm_on_sphere(top, d);
  if (!(mu > 1e-9 * top_scale)) return out;

  // Lower-degree bound: rest_i(r) = sum_{|e| < h} |c| r^{|e|}.
  auto rest_bound = [&](double r) {
    double s2 = 0.0;
    for (const auto& comp : field.components()) {
      double s = 0.0;
      for (const auto& [e, c] : comp.terms()) {
        int total = 0;
        for (int v : e) total += v;
        if (total < h) s += std::fabs(c) * std::pow(r, total);
      }
      s2 += s * s;
    }
    return std::sqrt(s2);
  };
  double r = 1.0;
  for (int i = 0; i < 400; ++i) {
    if (mu * std::pow(r, h) > 2.0 * rest_bound(r)) {
      out.certified = true;
      out.radius = r;
      return out;
    }
    r *= 1.1;
  }
  return out;
}

// Moment-ratio style default box: 2 * max over coefficient-degree pairs of
// (|c_low| / |c_high|)^{1/gap}, floor 5.
double default_box_radius(const ReducedField& field) {
  double box = 5.0;
  for (const auto& comp : field.components()) {
    std::map<int, double> by_degree;
    for (const auto& [e, c] : comp.terms()) {
      int total = 0;
      for (int v : e) total += v;
      by_degree[total] = std::max(by_degree[total], std::fabs(c));
    }
    for (auto it1 = by_degree.begin(); it1 != by_degree.end(); ++it1)
      for (auto it2 = std::next(it1); it2 != by_degree.end(); ++it2) {
        double ratio = it1->second / it2->second;
        int gap = it2->first - it1->first;
        box = std::max(box, 2.0 * std::pow(ratio, 1.0 / gap));
      }
  }
  return box;
}

}  // namespace

const char* to_string(ZeroClass c) {
  switch (c) {
    case ZeroClass::nondegenerate_stable: return "nondegenerate_stable";
    case ZeroClass::degenerate_stable: return "degenerate_stable";
    case ZeroClass::degenerate_unstable: return "degenerate_unstable";
    case ZeroClass::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

int winding_number(const ReducedField& field, std::span<const double> center,
                   double radius, int samples) {
  if (field.dim() != 2) throw InvalidParams("winding number requires d = 2");
  for (int attempt = 0; attempt < 4; ++attempt) {
    double rho = radius * std::pow(1.37, attempt);
    double total = 0.0;
    double prev[2] = {0.0, 0.0};
    bool degenerate = false;
    for (int k = 0; k <= samples; ++k) {
      double t = 2.0 * M_PI * k / samples;
      double x[2] = {center[0] + rho * std::cos(t), center[1] + rho * std::sin(t)};
      auto v = field.eval(x);
      double n = std::hypot(v[0], v[1]);
      if (n < 1e-250) {
        degenerate = true;
        break;
      }
      if (k > 0) {
        double cross = prev[0] * v[1] - prev[1] * v[0];
        double dot = prev[0] * v[0] + prev[1] * v[1];
        total += std::atan2(cross, dot);
      }
      prev[0] = v[0];
      prev[1] = v[1];
    }
    if (!degenerate) return static_cast<int>(std::lround(total / (2.0 * M_PI)));
  }
  return 0;
}

int boundary_winding_number(const ReducedField& field, double box_radius,
                            int samples_per_edge) {
  if (field.dim() != 2) throw InvalidParams("winding number requires d = 2");
  const double R = box_radius;
  auto corner_path = [&](double s, double* x) {
    // Counterclockwise square boundary, s in [0, 4).
    int edge = static_cast<int>(s);
    double t = s - edge;
    switch (edge) {
      case 0: x[0] = -R + 2 * R * t; x[1] = -R; break;
      case 1: x[0] = R; x[1] = -R + 2 * R * t; break;
      case 2: x[0] = R - 2 * R * t; x[1] = R; break;
      default: x[0] = -R; x[1] = R - 2 * R * t; break;
    }
  };
  int n = 4 * samples_per_edge;
  double total = 0.0;
  double prev[2] = {0.0, 0.0};
  for (int k = 0; k <= n; ++k) {
    double s = 4.0 * k / n;
    if (s >= 4.0) s = 0.0;
    double x[2];
    corner_path(s, x);
    auto v = field.eval(x);
    if (k > 0) {
      double cross = prev[0] * v[1] - prev[1] * v[0];
      double dot = prev[0] * v[0] + prev[1] * v[1];
      total += std::atan2(cross, dot);
    }
    prev[0] = v[0];
    prev[1] = v[1];
  }
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

ZeroRecord classify_zero(const ReducedField& field, std::span<const double> xi,
                         const ZeroFindOptions& opts) {
  const int d = field.dim();
  if (static_cast<int>(xi.size()) != d) throw DimensionMismatch("zero point dimension");
  double box = opts.box_radius;
  if (box <= 0.0) {
    box = 1.0;
    for (double v : xi) box = std::max(box, 2.0 * std::fabs(v));
  }
  double scale = field.eval_scale(box);
  double tol_abs = opts.zero_tol_rel * scale;

  ZeroRecord rec;
  rec.location.assign(xi.begin(), xi.end());
  rec.residual = vec_norm(field.eval(xi));
  if (rec.residual > tol_abs)
    throw NotAZero("field norm " + std::to_string(rec.residual) +
                   " above zero tolerance " + std::to_string(tol_abs));
  rec.jacobian = field.jacobian(xi);
  rec.det = determinant(rec.jacobian);

  double jscale = 0.0;
  for (const auto& row : rec.jacobian)
    for (double v : row) jscale = std::max(jscale, std::fabs(v));

  if (jscale > 0.0 && std::fabs(rec.det) > opts.det_tol * std::pow(jscale, d)) {
    rec.classification = ZeroClass::nondegenerate_stable;
    rec.local_degree = rec.det > 0 ? 1 : -1;
    return rec;
  }

  const double probe = std::max(10.0 * opts.dedup_tol_rel * box, 1e-7 * box);
  if (d == 1) {
    // Escalate the probe radius until the field rises above noise on both
    // sides (flat zeros like xi^k need a wider look).
    double fm = 0.0, fp = 0.0;
    double probe_floor = 1e-3 * opts.zero_tol_rel * scale;
    bool resolved = false;
    for (double rho = probe; rho <= 0.3 * box; rho *= 10.0) {
      double xm[1] = {rec.location[0] - rho};
      double xp[1] = {rec.location[0] + rho};
      fm = field.eval(xm)[0];
      fp = field.eval(xp)[0];
      if (std::fabs(fm) > probe_floor && std::fabs(fp) > probe_floor) {
        resolved = true;
        break;
      }
    }
    if (!resolved) {
      rec.classification = ZeroClass::indeterminate;
      return rec;
    }
    if (fm < 0.0 && fp > 0.0) {
      rec.classification = ZeroClass::degenerate_stable;
      rec.local_degree = 1;
    } else if (fm > 0.0 && fp < 0.0) {
      rec.classification = ZeroClass::degenerate_stable;
      rec.local_degree = -1;
    } else {
      // No sign change: a constant perturbation removes the zero.
      rec.classification = ZeroClass::degenerate_unstable;
      rec.local_degree = 0;
    }
    return rec;
  }
  if (d == 2) {
    int w = winding_number(field, rec.location, probe, opts.winding_samples);
    rec.local_degree = w;
    rec.classification = (w != 0) ? ZeroClass::degenerate_stable : ZeroClass::indeterminate;
    return rec;
  }
  rec.classification = ZeroClass::indeterminate;
  return rec;
}

ZeroSet find_zeros(const ReducedField& field, const ZeroFindOptions& opts) {
  const int d = field.dim();
  if (d < 1 || d > 3) throw InvalidParams("zero search supports 1 <= d <= 3");

  ZeroSet out;
  out.grid_per_axis = opts.grid_per_axis;
  if (field.identically_zero()) {
    out.field_identically_zero = true;
    out.search_box = opts.box_radius > 0 ? opts.box_radius : 5.0;
    out.completeness = "heuristic";
    out.min_norm_on_grid = 0.0;
    return out;
  }

  Completeness cert = certified_zero_bound(field);
  double box = opts.box_radius;
  if (box <= 0.0) {
    box = default_box_radius(field);
    if (cert.certified) box = std::max(box, 1.25 * cert.radius);
  }
  out.search_box = box;
  out.certified_radius = cert.certified ? cert.radius : -1.0;
  out.completeness = (cert.certified && box >= cert.radius) ? "complete" : "heuristic";

  const double scale = field.eval_scale(box);
  const double tol_abs = opts.zero_tol_rel * scale;
  const double dedup = opts.dedup_tol_rel * box;

  const int g = std::max(2, opts.grid_per_axis);
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(g);

  std::vector<NewtonResult> results(total);
  std::vector<double> grid_norms(total);
  parallel_for(total, [&](std::size_t idx) {
    std::vector<double> x(d);
    std::size_t rem = idx;
    for (int k = 0; k < d; ++k) {
      int i = static_cast<int>(rem % g);
      rem /= g;
      x[k] = -box + 2.0 * box * (i + 0.5) / g;
    }
    grid_norms[idx] = vec_norm(field.eval(x));
    results[idx] = newton_polish(field, std::move(x), 0.05 * tol_abs,
                                 opts.max_newton_iterations);
  });

  out.min_norm_on_grid = grid_norms.empty() ? 0.0 : grid_norms[0];
  for (double v : grid_norms) out.min_norm_on_grid = std::min(out.min_norm_on_grid, v);

  // Deduplicate: best residual first, keep points separated by dedup.
  std::vector<const NewtonResult*> converged;
  for (const auto& r : results) {
    if (!r.converged) continue;
    bool inside = true;
    for (double v : r.x)
      if (std::fabs(v) > box + dedup) inside = false;
    if (inside) converged.push_back(&r);
  }
  std::sort(converged.begin(), converged.end(), [](const auto* a, const auto* b) {
    if (a->residual != b->residual) return a->residual < b->residual;
    return a->x < b->x;
  });
  std::vector<std::vector<double>> kept;
  for (const auto* r : converged) {
    bool dup = false;
    for (const auto& k : kept) {
      double dist = 0.0;
      for (int j = 0; j < d; ++j) dist += (k[j] - r->x[j]) * (k[j] - r->x[j]);
      if (std::sqrt(dist) <= dedup) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(r->x);
  }
  std::sort(kept.begin(), kept.end());

  ZeroFindOptions copts = opts;
  copts.box_radius = box;
  for (const auto& x : kept) out.zeros.push_back(classify_zero(field, x, copts));
  return out;
}

}  // namespace peakcount
