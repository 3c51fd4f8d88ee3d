#include <doctest.h>

#include <cmath>

#include "peakcount/errors.hpp"
#include "peakcount/reduction.hpp"
#include "test_helpers.hpp"

using namespace peakcount;

TEST_CASE("worked profile reduces to the four-monomial field") {
  const auto& b = testutil::example_bundle();
  double c2 = b.table.c_moment(2), c4 = b.table.c_moment(4);
  ReducedField f = reduce_field(testutil::example_profile_57(), b.table);

  CHECK(f.component(0).term_count() == 3);
  CHECK(f.component(1).term_count() == 1);
  CHECK(f.component(0).coeff({0, 0}) == doctest::Approx(4 * c4).epsilon(1e-10));
  CHECK(f.component(0).coeff({2, 0}) == doctest::Approx(30 * c2).epsilon(1e-10));
  CHECK(f.component(0).coeff({0, 2}) == doctest::Approx(-6 * c2).epsilon(1e-10));
  CHECK(f.component(1).coeff({1, 1}) == doctest::Approx(-12 * c2).epsilon(1e-10));
  CHECK(f.max_degree() <= 4);  // deg L_i <= alpha

  double origin[2] = {0.0, 0.0};
  auto v = f.eval(origin);
  CHECK(v[0] == doctest::Approx(4 * c4).epsilon(1e-12));
  CHECK(v[1] == 0.0);
}

TEST_CASE("odd-in-y1 profile gives a vanishing second component on the axis") {
  const auto& b = testutil::example_bundle();
  ReducedField f = reduce_field(testutil::example_profile_57(), b.table);
  for (double xi2 : {-1.5, 0.3, 2.0}) {
    double xi[2] = {0.0, xi2};
    CHECK(f.eval(xi)[1] == 0.0);
  }
}

TEST_CASE("field agrees with direct quadrature of the shifted integral") {
  const auto& b = testutil::example_bundle();
  SparsePoly q = testutil::example_profile_57();
  ReducedField f = reduce_field(q, b.table);
  SparsePoly d1 = q.derivative(0), d2 = q.derivative(1);
  testutil::TestRng rng;
  for (int t = 0; t < 20; ++t) {
    double x1 = rng.range(-3.0, 3.0), x2 = rng.range(-3.0, 3.0);
    double xi[2] = {x1, x2};
    auto v = f.eval(xi);
    double o1 = testutil::brute_force_2d(b.weight, d1, x1, x2);
    double o2 = testutil::brute_force_2d(b.weight, d2, x1, x2);
    CHECK(std::fabs(v[0] - o1) <= 1e-5 * (1.0 + std::fabs(v[0])));
    CHECK(std::fabs(v[1] - o2) <= 1e-5 * (1.0 + std::fabs(v[1])));
  }
}

TEST_CASE("one-dimensional reductions match the binomial expansions") {
  GroundState gs = solve_ground_state({3.0, 2});
  RadialWeight w(gs);
  MomentTable tab(w, 6);
  double c2 = tab.c_moment(2), c4 = tab.c_moment(4);

  SUBCASE("y^4 -> 12 c2 xi") {
    SparsePoly q(1);
    q.add_term({4}, 1.0);
    ReducedField f = reduce_field(q, tab);
    CHECK(f.component(0).term_count() == 1);
    CHECK(f.component(0).coeff({1}) == doctest::Approx(12 * c2).epsilon(1e-10));
  }
  SUBCASE("y^3 -> 3 c2 (constant, never zero)") {
    SparsePoly q(1);
    q.add_term({3}, 1.0);
    ReducedField f = reduce_field(q, tab);
    CHECK(f.component(0).term_count() == 1);
    CHECK(f.component(0).coeff({0}) == doctest::Approx(3 * c2).epsilon(1e-10));
  }
  SUBCASE("y^6 -> 30 c4 xi + 60 c2 xi^3") {
    SparsePoly q(1);
    q.add_term({6}, 1.0);
    ReducedField f = reduce_field(q, tab);
    CHECK(f.component(0).term_count() == 2);
    CHECK(f.component(0).coeff({1}) == doctest::Approx(30 * c4).epsilon(1e-10));
    CHECK(f.component(0).coeff({3}) == doctest::Approx(60 * c2).epsilon(1e-10));
  }
}

TEST_CASE("harmonic profiles reduce to the zero field") {
  const auto& b = testutil::example_bundle();
  SparsePoly h(2);
  h.add_term({4, 0}, 1.0);
  h.add_term({2, 2}, -6.0);
  h.add_term({0, 4}, 1.0);
  ReducedField f = reduce_field(h, b.table);
  CHECK(f.identically_zero());
  double xi[2] = {0.7, -0.4};
  auto v = f.eval(xi);
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 0.0);
}

TEST_CASE("reduction is linear in the profile") {
  const auto& b = testutil::example_bundle();
  SparsePoly q1 = testutil::example_profile_57();
  SparsePoly q2(2);
  q2.add_term({4, 1}, 0.5);
  q2.add_term({2, 3}, -1.25);
  q2.add_term({0, 5}, 2.0);
  ReduceOptions raw;
  raw.prune = false;
  raw.zero_field_rel = 0.0;
  double a = 1.7, c = -0.6;
  ReducedField combo = reduce_field(q1.scaled(a) + q2.scaled(c), b.table, raw);
  ReducedField f1 = reduce_field(q1, b.table, raw);
  ReducedField f2 = reduce_field(q2, b.table, raw);
  for (int i = 0; i < 2; ++i) {
    SparsePoly diff =
        combo.component(i) - (f1.component(i).scaled(a) + f2.component(i).scaled(c));
    CHECK(diff.max_abs_coeff() <=
          1e-12 * std::max(1.0, combo.component(i).max_abs_coeff()));
  }
}

TEST_CASE("rotation equivariance of the reduction") {
  const auto& b = testutil::example_bundle();
  SparsePoly q = testutil::example_profile_57();
  ReducedField f = reduce_field(q, b.table);
  double theta = 1.1318;
  double cs = std::cos(theta), sn = std::sin(theta);
  ReducedField frot = reduce_field(q.substitute_linear({{cs, -sn}, {sn, cs}}), b.table);
  testutil::TestRng rng;
  for (int t = 0; t < 12; ++t) {
    double xi[2] = {rng.range(-2.0, 2.0), rng.range(-2.0, 2.0)};
    double rxi[2] = {cs * xi[0] - sn * xi[1], sn * xi[0] + cs * xi[1]};
    auto lhs = frot.eval(xi);
    auto v = f.eval(rxi);
    double rhs0 = cs * v[0] + sn * v[1];
    double rhs1 = -sn * v[0] + cs * v[1];
    double scale = std::max({1.0, std::fabs(rhs0), std::fabs(rhs1)});
    CHECK(std::fabs(lhs[0] - rhs0) <= 1e-8 * scale);
    CHECK(std::fabs(lhs[1] - rhs1) <= 1e-8 * scale);
  }
}

TEST_CASE("Jacobian: closed form, symmetry, finite differences, derivative order") {
  const auto& b = testutil::example_bundle();
  double c2 = b.table.c_moment(2);
  SparsePoly q = testutil::example_profile_57();
  ReducedField f = reduce_field(q, b.table);

  SUBCASE("matrix matches the closed form") {
    double xi[2] = {0.8, -1.1};
    auto J = f.jacobian(xi);
    CHECK(J[0][0] == doctest::Approx(60 * c2 * xi[0]).epsilon(1e-10));
    CHECK(J[0][1] == doctest::Approx(-12 * c2 * xi[1]).epsilon(1e-10));
    CHECK(J[1][0] == doctest::Approx(-12 * c2 * xi[1]).epsilon(1e-10));
    CHECK(J[1][1] == doctest::Approx(-12 * c2 * xi[0]).epsilon(1e-10));
  }

  SUBCASE("determinant at an axis point") {
    double c4 = b.table.c_moment(4);
    double xi2 = std::sqrt(2.0 * c4 / (3.0 * c2));
    double xi[2] = {0.0, xi2};
    auto J = f.jacobian(xi);
    double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    CHECK(det == doctest::Approx(-96 * c2 * c4).epsilon(1e-10));
  }

  SUBCASE("gradient structure: symmetric Jacobian") {
    testutil::TestRng rng;
    double scale = f.eval_scale(3.0);
    for (int t = 0; t < 10; ++t) {
      double xi[2] = {rng.range(-3.0, 3.0), rng.range(-3.0, 3.0)};
      auto J = f.jacobian(xi);
      CHECK(std::fabs(J[0][1] - J[1][0]) <= 1e-10 * scale);
    }
  }

  SUBCASE("finite differences") {
    testutil::TestRng rng;
    const double eps = 1e-5;
    for (int t = 0; t < 8; ++t) {
      double xi[2] = {rng.range(-2.0, 2.0), rng.range(-2.0, 2.0)};
      auto J = f.jacobian(xi);
      for (int j = 0; j < 2; ++j) {
        double xp[2] = {xi[0], xi[1]}, xm[2] = {xi[0], xi[1]};
        xp[j] += eps;
        xm[j] -= eps;
        auto vp = f.eval(xp), vm = f.eval(xm);
        for (int i = 0; i < 2; ++i) {
          double fd = (vp[i] - vm[i]) / (2 * eps);
          CHECK(std::fabs(J[i][j] - fd) <= 1e-6 * std::max(1.0, std::fabs(J[i][j])));
        }
      }
    }
  }

  SUBCASE("differentiate-then-reduce equals reduce-then-differentiate") {
    ReduceOptions raw;
    raw.prune = false;
    raw.zero_field_rel = 0.0;
    ReducedField fr = reduce_field(q, b.table, raw);
    for (int j = 0; j < 2; ++j) {
      ReducedField fd = reduce_field(q.derivative(j), b.table, raw);
      for (int i = 0; i < 2; ++i) {
        SparsePoly diff = fr.jacobian_polys()[i][j] - fd.component(i);
        double scale = std::max(1.0, fd.component(i).max_abs_coeff());
        CHECK(diff.max_abs_coeff() <= 1e-15 * scale);
      }
    }
  }
}

TEST_CASE("missing moments are reported") {
  GroundState gs = solve_ground_state({3.0, 2});
  RadialWeight w(gs);
  MomentTable small(w, 4);
  SparsePoly q(1);
  q.add_term({8}, 1.0);  // needs moments up to order 7
  CHECK_THROWS_AS(reduce_field(q, small), MomentUnavailable);
}

TEST_CASE("dimension guards") {
  const auto& b = testutil::example_bundle();
  SparsePoly q1(1);
  q1.add_term({4}, 1.0);
  CHECK_THROWS_AS(reduce_field(q1, b.table), DimensionMismatch);
  ReducedField f = reduce_field(testutil::example_profile_57(), b.table);
  double x1[1] = {0.0};
  CHECK_THROWS_AS(f.eval(x1), DimensionMismatch);
}
