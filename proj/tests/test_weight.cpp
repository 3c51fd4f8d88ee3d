#include <doctest.h>

#include <cmath>

#include "peakcount/errors.hpp"
#include "peakcount/quadrature.hpp"
#include "peakcount/weight.hpp"
#include "test_helpers.hpp"

using namespace peakcount;

TEST_CASE("1D first integral: e = U'^2 and the soliton moment 2/3") {
  GroundState gs = solve_ground_state({3.0, 1});
  RadialWeight w(gs);
  CHECK(std::fabs(w(0.0)) <= 1e-10);
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    double du = gs.eval(r).du;
    CHECK(w(r) == doctest::Approx(du * du).epsilon(1e-8));
  }
  CHECK(radial_moment(w, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("weight value at the origin") {
  const auto& b = testutil::example_bundle();
  double u0 = b.gs.u0();
  CHECK(b.weight(0.0) == doctest::Approx(0.5 * u0 * u0 - u0 * u0 * u0 / 3.0).epsilon(1e-12));
}

TEST_CASE("weight decays at twice the profile rate") {
  const auto& b = testutil::example_bundle();
  double r1 = 0.6 * b.gs.truncation_radius();
  double r2 = r1 + 2.0;
  double rate = -std::log(std::fabs(b.weight(r2)) / std::fabs(b.weight(r1))) / (r2 - r1);
  CHECK(rate == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("radial moment against a fixed-order Gauss-Legendre oracle") {
  const auto& b = testutil::example_bundle();
  double oracle = gauss_legendre_panels([&](double r) { return b.weight(r) * r * r; },
                                        0.0, b.gs.truncation_radius(), 400, 20);
  CHECK(std::fabs(b.table.radial_moment(2) - oracle) <= 1e-8 * std::fabs(oracle));
}

TEST_CASE("huge moment orders stay finite") {
  const auto& b = testutil::example_bundle();
  double v = radial_moment(b.weight, 40);
  CHECK(std::isfinite(v));
  CHECK(v > 0.0);
}

TEST_CASE("monomial moments: parity, axis symmetry, tensor oracle") {
  const auto& b = testutil::example_bundle();
  CHECK(b.table.monomial_moment({1, 2}) == 0.0);
  CHECK(b.table.monomial_moment({3, 1}) == 0.0);
  CHECK(b.table.monomial_moment({2, 0}) ==
        doctest::Approx(b.table.monomial_moment({0, 2})).epsilon(1e-12));

  // Direct 2D tensor-grid quadrature of int e(|y|) y1^2 y2^2 dy.
  double L = b.gs.truncation_radius();
  auto inner = [&](double y1) {
    return gauss_legendre_panels(
        [&](double y2) {
          return b.weight(std::hypot(y1, y2)) * y1 * y1 * y2 * y2;
        },
        -L, L, 60, 16);
  };
  double direct = gauss_legendre_panels(inner, -L, L, 60, 16);
  double fact = b.table.monomial_moment({2, 2});
  CHECK(std::fabs(fact - direct) <= 1e-6 * std::fabs(fact));
}

TEST_CASE("radial factorization against tensor quadrature for low orders") {
  // d = 1 (N = 2): M_m = 2 int e r^m dr; check |beta| <= 6 against a plain
  // symmetric line quadrature.
  GroundState gs = solve_ground_state({3.0, 2});
  RadialWeight w(gs);
  MomentTable tab(w, 6);
  double L = gs.truncation_radius();
  for (int m : {0, 2, 4, 6}) {
    double direct = gauss_legendre_panels(
        [&](double y) { return w(std::fabs(y)) * std::pow(y, m); }, -L, L, 240, 16);
    double fact = tab.monomial_moment({m});
    double scale = std::max(1.0, std::fabs(fact));
    CHECK(std::fabs(fact - direct) <= 1e-6 * scale);
  }
}

TEST_CASE("c moment sign laws") {
  for (auto [dim, p] : {std::pair<int, double>{2, 3.0}, {3, 2.0}, {3, 3.0}}) {
    GroundState gs = solve_ground_state({p, dim});
    RadialWeight w(gs);
    MomentTable tab(w, 6);
    double ctol = tab.c_tol();
    CHECK(ctol > 0.0);
    for (int m : {0, 1, 3, 5}) CHECK(std::fabs(tab.c_moment(m)) <= ctol);
    for (int m : {2, 4, 6}) CHECK(tab.c_moment(m) > 10.0 * ctol);
  }
}

TEST_CASE("identity route cross-checks the direct c moments") {
  SUBCASE("k = 0 vanishes through its prefactor") {
    const auto& b = testutil::example_bundle();
    CHECK(b.table.c_moment_identity(0) == 0.0);
  }
  for (auto [dim, p] : {std::pair<int, double>{3, 2.0}, {2, 3.0}, {3, 3.0}}) {
    GroundState gs = solve_ground_state({p, dim});
    RadialWeight w(gs);
    MomentTable tab(w, 8);
    for (int k : {1, 2, 3}) {
      double direct = tab.c_moment(2 * k);
      double ident = tab.c_moment_identity(k);
      CHECK(std::fabs(direct - ident) <= 1e-6 * std::max(1.0, std::fabs(direct)));
      CHECK(ident > 0.0);  // strict positivity of the U'^2 integrand
    }
  }
}

TEST_CASE("angular factor matches known sphere integrals") {
  // |S^1| = 2 pi, |S^2| = 4 pi; int_{S^1} w1^2 = pi.
  CHECK(angular_factor({0, 0}) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(angular_factor({0, 0, 0}) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(angular_factor({2, 0}) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(angular_factor({1, 0}) == 0.0);
  CHECK(angular_factor({2, 2}) == doctest::Approx(M_PI / 4.0).epsilon(1e-14));
}

TEST_CASE("moment table guards") {
  const auto& b = testutil::example_bundle();
  CHECK_THROWS_AS(b.table.monomial_moment({10, 0}), MomentUnavailable);
  CHECK_THROWS_AS(b.table.monomial_moment({2, 0, 0}), DimensionMismatch);
  GroundState gs1 = solve_ground_state({3.0, 1});
  RadialWeight w1(gs1);
  CHECK_THROWS_AS(MomentTable(w1, 4), InvalidParams);  // d = 0 has no moments
}
