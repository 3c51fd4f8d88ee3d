#include "peakcount/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "peakcount/classify.hpp"
#include "peakcount/errors.hpp"
#include "peakcount/ground_state.hpp"
#include "peakcount/poly.hpp"
#include "peakcount/quadrature.hpp"
#include "peakcount/reduction.hpp"
#include "peakcount/weight.hpp"
#include "peakcount/zeros.hpp"

namespace peakcount {

namespace {

using Clock = std::chrono::steady_clock;

struct Rng {
  std::uint64_t s = 0x243f6a8885a308d3ull;
  double uniform() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return static_cast<double>((s * 0x2545f4914f6cdd1dull) >> 11) /
           static_cast<double>(1ull << 53);
  }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
  void info(const std::string& what) {
    if (detail.tellp() > 0) detail << "; ";
    detail << what;
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double closed_form_1d(double p, double r) {
  return std::pow(0.5 * (p + 1.0), 1.0 / (p - 1.0)) *
         std::pow(1.0 / std::cosh(0.5 * (p - 1.0) * r), 2.0 / (p - 1.0));
}

SparsePoly example_profile() {
  SparsePoly q(2);
  q.add_term({5, 0}, 1.0);
  q.add_term({1, 4}, -1.0);
  return q;
}

// Direct tensor-product quadrature of the shifted-gradient integral; the
// independent route the moment factorization is checked against.
double brute_force_component(const RadialWeight& w, const SparsePoly& partial,
                             double x1, double x2) {
  double lim = w.ground_state().truncation_radius() +
               std::max(std::fabs(x1), std::fabs(x2)) + 2.0;
  auto inner = [&](double y1) {
    return gauss_legendre_panels(
        [&](double y2) {
          double pt[2] = {y1 + x1, y2 + x2};
          return w(std::hypot(y1, y2)) * partial.eval(pt);
        },
        -lim, lim, 48, 12);
  };
  return gauss_legendre_panels(inner, -lim, lim, 48, 12);
}

CriterionResult criterion_1() {
  Check c;
  for (double p : {2.0, 3.0, 5.0}) {
    auto t0 = Clock::now();
    GroundState gs = solve_ground_state({p, 1});
    double sup = 0.0;
    for (double r = 0.0; r <= gs.truncation_radius() + 8.0; r += 0.0043)
      sup = std::max(sup, std::fabs(gs.eval(r).u - closed_form_1d(p, r)));
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(sup <= 1e-7, "p=" + fmt(p) + " sup error " + fmt(sup));
    c.expect(secs < 1.0, "p=" + fmt(p) + " runtime " + fmt(secs) + "s");
    if (c.ok) c.info("p=" + fmt(p) + ": sup " + fmt(sup) + ", " + fmt(secs) + "s");
  }
  return {1, "1D ground-state closed-form oracle", c.ok, c.detail.str(), 0.0};
}

CriterionResult criterion_2() {
  Check c;
  auto t0 = Clock::now();
  for (auto [dim, p] : {std::pair<int, double>{2, 3.0}, {3, 2.0}, {3, 3.0}}) {
    GroundState gs = solve_ground_state({p, dim});
    RadialWeight w(gs);
    MomentTable tab(w, 6);
    double c2 = tab.c_moment(2);
    for (int m : {0, 1, 3, 5})
      c.expect(std::fabs(tab.c_moment(m)) <= 1e-7 * c2,
               "(N=" + std::to_string(dim) + ",p=" + fmt(p) + ") |c" +
                   std::to_string(m) + "|=" + fmt(std::fabs(tab.c_moment(m))) +
                   " above 1e-7 c2");
    for (int m : {2, 4, 6})
      c.expect(tab.c_moment(m) > 0.0,
               "(N=" + std::to_string(dim) + ",p=" + fmt(p) + ") c" +
                   std::to_string(m) + " not positive");
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  c.expect(secs < 10.0, "total runtime " + fmt(secs) + "s above 10s");
  c.info("runtime " + fmt(secs) + "s");
  return {2, "moment sign laws", c.ok, c.detail.str(), 0.0};
}

CriterionResult criterion_3() {
  Check c;
  for (auto [dim, p] : {std::pair<int, double>{3, 2.0}, {2, 3.0}}) {
    GroundState gs = solve_ground_state({p, dim});
    RadialWeight w(gs);
    MomentTable tab(w, 8);
    for (int k : {1, 2, 3}) {
      double direct = tab.c_moment(2 * k);
      double ident = tab.c_moment_identity(k);
      double rel = std::fabs(direct - ident) / std::max(1.0, std::fabs(direct));
      c.expect(rel <= 1e-6, "(N=" + std::to_string(dim) + ",p=" + fmt(p) + ") k=" +
                                std::to_string(k) + " rel " + fmt(rel));
      if (c.ok && k == 3) c.info("(N=" + std::to_string(dim) + ",p=" + fmt(p) +
                                 ") worst rel " + fmt(rel));
    }
  }
  return {3, "identity cross-route for c_{2k}", c.ok, c.detail.str(), 0.0};
}

struct ExampleArtifacts {
  GroundState gs;
  RadialWeight weight;
  MomentTable table;
  ReducedField field;

  ExampleArtifacts()
      : gs(solve_ground_state({2.0, 3})),
        weight(gs),
        table(weight, 6),
        field(reduce_field(example_profile(), table)) {}
};

CriterionResult criterion_4(const ExampleArtifacts& art) {
  Check c;
  double c2 = art.table.c_moment(2), c4 = art.table.c_moment(4);
  const SparsePoly& L1 = art.field.component(0);
  const SparsePoly& L2 = art.field.component(1);
  c.expect(L1.term_count() == 3 && L2.term_count() == 1,
           "monomial counts " + std::to_string(L1.term_count()) + "+" +
               std::to_string(L2.term_count()) + " differ from 3+1");
  auto rel = [](double a, double b) { return std::fabs(a - b) / std::fabs(b); };
  c.expect(rel(L1.coeff({0, 0}), 4 * c4) <= 1e-5, "constant term vs 4c4");
  c.expect(rel(L1.coeff({2, 0}), 30 * c2) <= 1e-5, "xi1^2 term vs 30c2");
  c.expect(rel(L1.coeff({0, 2}), -6 * c2) <= 1e-5, "xi2^2 term vs -6c2");
  c.expect(rel(L2.coeff({1, 1}), -12 * c2) <= 1e-5, "xi1 xi2 term vs -12c2");
  if (c.ok)
    c.info("coefficients (" + fmt(L1.coeff({0, 0})) + ", " + fmt(L1.coeff({2, 0})) +
           ", " + fmt(L1.coeff({0, 2})) + ", " + fmt(L2.coeff({1, 1})) + ")");
  return {4, "reduced-field reproduction for the worked profile", c.ok, c.detail.str(), 0.0};
}

CriterionResult criterion_5(const ExampleArtifacts& art) {
  Check c;
  double c2 = art.table.c_moment(2), c4 = art.table.c_moment(4);
  double want = std::sqrt(2.0 * c4 / (3.0 * c2));

  ZeroSet zs = find_zeros(art.field);
  c.expect(zs.zeros.size() == 2, "found " + std::to_string(zs.zeros.size()) + " zeros");
  if (zs.zeros.size() == 2) {
    for (const auto& z : zs.zeros) {
      c.expect(std::fabs(std::fabs(z.location[1]) - want) <= 1e-6 * want,
               "xi2 location " + fmt(z.location[1]));
      c.expect(std::fabs(z.location[0]) <= 1e-6 * want, "xi1 not at 0");
      c.expect(z.classification == ZeroClass::nondegenerate_stable,
               "classification not nondegenerate_stable");
      c.expect(std::fabs(z.det - (-96.0 * c2 * c4)) <= 1e-5 * 96.0 * c2 * c4,
               "det " + fmt(z.det) + " vs -96 c2 c4 = " + fmt(-96.0 * c2 * c4));
    }
  }
  RunConfig cfg;
  cfg.p = 2.0;
  cfg.dim = 3;
  cfg.profile = example_profile();
  ClassificationReport rep = classify_domain(cfg);
  c.expect(rep.exact && rep.predicted_count == 2,
           "verdict " + std::to_string(rep.predicted_count) +
               (rep.exact ? " (exact)" : " (lower bound)") + " != exactly 2");
  if (c.ok) c.info("zeros at xi2 = +-" + fmt(want) + ", verdict exactly 2");
  return {5, "stable-zero set and verdict for the worked profile", c.ok, c.detail.str(), 0.0};
}

CriterionResult criterion_6(const ExampleArtifacts& art) {
  Check c;
  Rng rng;
  SparsePoly q = example_profile();
  SparsePoly d1 = q.derivative(0), d2 = q.derivative(1);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    double x1 = rng.range(-3.0, 3.0), x2 = rng.range(-3.0, 3.0);
    double pt[2] = {x1, x2};
    auto v = art.field.eval(pt);
    double b1 = brute_force_component(art.weight, d1, x1, x2);
    double b2 = brute_force_component(art.weight, d2, x1, x2);
    double r1 = std::fabs(v[0] - b1) / (1.0 + std::fabs(v[0]));
    double r2 = std::fabs(v[1] - b2) / (1.0 + std::fabs(v[1]));
    worst = std::max({worst, r1, r2});
  }
  c.expect(worst <= 1e-5, "worst relative deviation " + fmt(worst));
  if (c.ok) c.info("worst relative deviation " + fmt(worst) + " over 20 points");
  return {6, "moment factorization vs direct quadrature", c.ok, c.detail.str(), 0.0};
}

CriterionResult criterion_7(const ExampleArtifacts& art) {
  Check c;
  SparsePoly q(2);
  q.add_term({3, 0}, 2.0);
  q.add_term({0, 4}, 1.0);
  RunConfig cfg;
  cfg.p = 2.0;
  cfg.dim = 3;
  cfg.profile = q;

  ClassificationReport rep = classify_domain(cfg);
  c.expect(rep.exact && rep.predicted_count == 0 && rep.shortcut == "proposition_odd_monomial",
           "shortcut verdict wrong");

  ClassifyOptions full;
  full.force_full_pipeline = true;
  ClassificationReport pipe = classify_domain(cfg, full);
  double c2 = art.table.c_moment(2);
  c.expect(pipe.count_lower_bound == 0, "pipeline found stable zeros");
  c.expect(pipe.zeros && pipe.zeros->zeros.empty(), "pipeline zero list not empty");
  double min_norm = pipe.zeros ? pipe.zeros->min_norm_on_grid : 0.0;
  c.expect(min_norm >= 2.9 * c2,
           "min |L| on grid " + fmt(min_norm) + " below 2.9 c2 = " + fmt(2.9 * c2));
  if (c.ok) c.info("min |L| " + fmt(min_norm) + " >= 2.9 c2 = " + fmt(2.9 * c2));
  return {7, "odd-exponent non-existence, shortcut and pipeline", c.ok, c.detail.str(), 0.0};
}

CriterionResult criterion_8() {
  Check c;
  struct Case {
    int degree;
    long count;
  };
  for (auto [degree, count] : {Case{4, 1}, Case{5, 0}, Case{6, 1}}) {
    SparsePoly psi(1);
    psi.add_term({degree}, 1.0);
    CurvatureAnalysis ca = curvature_order(psi);
    long curv_count = ca.verdict == CurvatureVerdict::exactly_one ? 1
                      : ca.verdict == CurvatureVerdict::no_solution ? 0
                                                                    : -1;
    RunConfig cfg;
    cfg.p = 3.0;
    cfg.dim = 2;
    cfg.psi = psi;
    ClassificationReport rep = classify_domain(cfg);
    c.expect(curv_count == count, "t^" + std::to_string(degree) + " curvature count " +
                                      std::to_string(curv_count));
    c.expect(rep.exact && rep.predicted_count == count,
             "t^" + std::to_string(degree) + " pipeline count " +
                 std::to_string(rep.predicted_count));
    c.expect(crosscheck_1d(psi, 3.0), "t^" + std::to_string(degree) + " crosscheck failed");
    if (degree == 6 && rep.zeros && rep.zeros->zeros.size() == 1) {
      const ZeroRecord& z = rep.zeros->zeros[0];
      c.expect(z.stable() && z.local_degree.value_or(0) == 1,
               "t^6 zero not stable with local degree 1");
      // L'(0) = 30 c4 > 0: the zero is in fact nondegenerate (degree +1).
      c.expect(z.classification == ZeroClass::nondegenerate_stable,
               "t^6 zero classification " + std::string(to_string(z.classification)));
    }
  }
  if (c.ok) c.info("t^4 -> 1, t^5 -> 0, t^6 -> 1 (stable zero of degree 1); routes agree");
  return {8, "plane-curve order theorem vs reduction", c.ok, c.detail.str(), 0.0};
}

CriterionResult criterion_9() {
  Check c;
  // Worked profile: min |grad Lap Q| over the circle equals 6 sqrt 2,
  // attained at y1^2 = 1/8 (verified against the closed form; the value 12
  // only holds at the axis points (0, +-1), which are not the minimizers).
  Profile prof = validate_profile(example_profile());
  FlatnessResult fl = check_flatness_condition(prof);
  double expected = 6.0 * std::sqrt(2.0);
  c.expect(fl.holds, "flatness did not hold for the worked profile");
  c.expect(std::fabs(fl.min_grad_laplacian_norm - expected) <= 1e-6 * expected,
           "min norm " + fmt(fl.min_grad_laplacian_norm) + " vs 6 sqrt 2 = " +
               fmt(expected));

  SparsePoly h(2);
  h.add_term({4, 0}, 1.0);
  h.add_term({2, 2}, -6.0);
  h.add_term({0, 4}, 1.0);
  FlatnessResult fh = check_flatness_condition(validate_profile(h));
  c.expect(!fh.holds, "harmonic quartic unexpectedly satisfies the flatness condition");
  c.expect(fh.min_grad_laplacian_norm <= fh.tolerance,
           "harmonic quartic min norm " + fmt(fh.min_grad_laplacian_norm));
  if (c.ok)
    c.info("worked profile: min " + fmt(fl.min_grad_laplacian_norm) +
           " (= 6 sqrt 2); harmonic quartic: fails");
  return {9, "flatness condition on the sphere", c.ok, c.detail.str(), 0.0};
}

CriterionResult criterion_10(const ExampleArtifacts& art) {
  Check c;
  Rng rng;

  // Jacobian symmetry (the field is a gradient).
  double sym_scale = art.field.eval_scale(3.0);
  for (int t = 0; t < 10; ++t) {
    double xi[2] = {rng.range(-3.0, 3.0), rng.range(-3.0, 3.0)};
    auto J = art.field.jacobian(xi);
    c.expect(std::fabs(J[0][1] - J[1][0]) <= 1e-10 * sym_scale, "Jacobian asymmetry");
  }

  // Rotation equivariance: L[Q o R](xi) = R^T L[Q](R xi).
  {
    double theta = 0.7034;
    double cs = std::cos(theta), sn = std::sin(theta);
    SparsePoly rotated = example_profile().substitute_linear({{cs, -sn}, {sn, cs}});
    ReducedField frot = reduce_field(rotated, art.table);
    for (int t = 0; t < 8; ++t) {
      double xi[2] = {rng.range(-2.0, 2.0), rng.range(-2.0, 2.0)};
      double rxi[2] = {cs * xi[0] - sn * xi[1], sn * xi[0] + cs * xi[1]};
      auto lhs = frot.eval(xi);
      auto orig = art.field.eval(rxi);
      double rhs0 = cs * orig[0] + sn * orig[1];
      double rhs1 = -sn * orig[0] + cs * orig[1];
      double scale = std::max({1.0, std::fabs(rhs0), std::fabs(rhs1)});
      c.expect(std::fabs(lhs[0] - rhs0) <= 1e-8 * scale &&
                   std::fabs(lhs[1] - rhs1) <= 1e-8 * scale,
               "rotation equivariance violated");
    }
  }

  // Linearity of the reduction (pruning disabled so coefficients compare).
  {
    SparsePoly q1 = example_profile();
    SparsePoly q2(2);
    q2.add_term({4, 1}, 0.5);
    q2.add_term({2, 3}, -1.25);
    q2.add_term({0, 5}, 2.0);
    ReduceOptions raw;
    raw.prune = false;
    raw.zero_field_rel = 0.0;
    double a = 1.7, b = -0.6;
    ReducedField combo = reduce_field(q1.scaled(a) + q2.scaled(b), art.table, raw);
    ReducedField f1 = reduce_field(q1, art.table, raw);
    ReducedField f2 = reduce_field(q2, art.table, raw);
    for (int i = 0; i < 2; ++i) {
      SparsePoly diff = combo.component(i) - (f1.component(i).scaled(a) + f2.component(i).scaled(b));
      double scale = std::max(1.0, combo.component(i).max_abs_coeff());
      c.expect(diff.max_abs_coeff() <= 1e-12 * scale, "reduction linearity violated");
    }
  }

  // Analytic Jacobian vs central finite differences.
  {
    const double eps = 1e-5;
    for (int t = 0; t < 8; ++t) {
      double xi[2] = {rng.range(-2.0, 2.0), rng.range(-2.0, 2.0)};
      auto J = art.field.jacobian(xi);
      for (int j = 0; j < 2; ++j) {
        double xp[2] = {xi[0], xi[1]}, xm[2] = {xi[0], xi[1]};
        xp[j] += eps;
        xm[j] -= eps;
        auto vp = art.field.eval(xp), vm = art.field.eval(xm);
        for (int i = 0; i < 2; ++i) {
          double fd = (vp[i] - vm[i]) / (2 * eps);
          double scale = std::max(1.0, std::fabs(J[i][j]));
          c.expect(std::fabs(J[i][j] - fd) <= 1e-6 * scale, "Jacobian vs FD mismatch");
        }
      }
    }
  }

  if (c.ok) c.info("symmetry, equivariance, linearity, FD Jacobian all within tolerance");
  return {10, "property suites", c.ok, c.detail.str(), 0.0};
}

}  // namespace

bool run_acceptance(const std::function<void(const CriterionResult&)>& on_result) {
  bool all = true;
  auto run = [&](auto&& fn) {
    auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    all = all && r.passed;
    on_result(r);
  };

  auto total0 = Clock::now();
  run(criterion_1);
  run(criterion_2);
  run(criterion_3);

  ExampleArtifacts art;
  run([&] { return criterion_4(art); });
  run([&] { return criterion_5(art); });
  run([&] { return criterion_6(art); });
  run([&] { return criterion_7(art); });
  run(criterion_8);
  run(criterion_9);
  run([&] {
    CriterionResult r = criterion_10(art);
    double total = std::chrono::duration<double>(Clock::now() - total0).count();
    if (total >= 120.0) {
      r.passed = false;
      r.detail += "; total acceptance runtime " + fmt(total) + "s above 120s";
    }
    return r;
  });
  return all;
}

}  // namespace peakcount
