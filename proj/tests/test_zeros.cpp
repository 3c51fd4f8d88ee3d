#include <doctest.h>

#include <cmath>

#include "peakcount/errors.hpp"
#include "peakcount/zeros.hpp"
#include "test_helpers.hpp"

using namespace peakcount;

namespace {

ReducedField worked_field() {
  const auto& b = testutil::example_bundle();
  return reduce_field(testutil::example_profile_57(), b.table);
}

}  // namespace

TEST_CASE("worked profile: the two symmetric zeros") {
  const auto& b = testutil::example_bundle();
  double c2 = b.table.c_moment(2), c4 = b.table.c_moment(4);
  double want = std::sqrt(2.0 * c4 / (3.0 * c2));

  ReducedField f = worked_field();
  ZeroSet zs = find_zeros(f);
  REQUIRE(zs.zeros.size() == 2);
  CHECK(zs.completeness == "complete");
  CHECK(zs.stable_count() == 2);
  for (const auto& z : zs.zeros) {
    CHECK(std::fabs(z.location[0]) <= 1e-6 * want);
    CHECK(std::fabs(std::fabs(z.location[1]) - want) <= 1e-6 * want);
    CHECK(z.classification == ZeroClass::nondegenerate_stable);
    CHECK(z.det == doctest::Approx(-96.0 * c2 * c4).epsilon(1e-6));
    CHECK(z.residual <= 1e-9 * f.eval_scale(zs.search_box));
  }
  // Symmetric pair.
  CHECK(zs.zeros[0].location[1] == doctest::Approx(-zs.zeros[1].location[1]).epsilon(1e-12));
}

TEST_CASE("re-polishing a reported zero stays put") {
  ReducedField f = worked_field();
  ZeroSet zs = find_zeros(f);
  for (const auto& z : zs.zeros) {
    ZeroRecord again = classify_zero(f, z.location);
    CHECK(again.classification == z.classification);
    CHECK(std::fabs(again.location[1] - z.location[1]) <= 1e-6 * zs.search_box);
  }
}

TEST_CASE("grid robustness: doubling the start grid changes nothing") {
  ReducedField f = worked_field();
  ZeroSet base = find_zeros(f);
  ZeroFindOptions dense;
  dense.grid_per_axis = 64;
  ZeroSet fine = find_zeros(f, dense);
  REQUIRE(base.zeros.size() == fine.zeros.size());
  double dedup = 1e-6 * base.search_box;
  for (std::size_t i = 0; i < base.zeros.size(); ++i) {
    double d = std::hypot(base.zeros[i].location[0] - fine.zeros[i].location[0],
                          base.zeros[i].location[1] - fine.zeros[i].location[1]);
    CHECK(d <= dedup);
  }
}

TEST_CASE("odd-exponent profile yields an empty zero set, bounded away from zero") {
  const auto& b = testutil::example_bundle();
  double c2 = b.table.c_moment(2);
  SparsePoly q(2);
  q.add_term({3, 0}, 1.0);
  q.add_term({0, 4}, 1.0);
  ZeroSet zs = find_zeros(reduce_field(q, b.table));
  CHECK(zs.zeros.empty());
  CHECK(zs.stable_count() == 0);
  CHECK(zs.min_norm_on_grid >= 3.0 * c2 * (1.0 - 1e-9));
}

TEST_CASE("one-dimensional field 12 c2 xi has the single zero at the origin") {
  GroundState gs = solve_ground_state({3.0, 2});
  RadialWeight w(gs);
  MomentTable tab(w, 6);
  SparsePoly q(1);
  q.add_term({4}, 1.0);
  ZeroSet zs = find_zeros(reduce_field(q, tab));
  REQUIRE(zs.zeros.size() == 1);
  CHECK(std::fabs(zs.zeros[0].location[0]) <= 1e-9);
  CHECK(zs.zeros[0].classification == ZeroClass::nondegenerate_stable);
  CHECK(zs.zeros[0].det == doctest::Approx(12.0 * tab.c_moment(2)).epsilon(1e-9));
  CHECK(zs.completeness == "complete");
}

TEST_CASE("degenerate classifications through the local degree") {
  SUBCASE("d = 2 winding zero: (xi1^2, xi2) is indeterminate") {
    SparsePoly s1(2);
    s1.add_term({2, 0}, 1.0);
    SparsePoly s2(2);
    s2.add_term({0, 1}, 1.0);
    ReducedField f = ReducedField::from_components({s1, s2});
    double origin[2] = {0.0, 0.0};
    ZeroRecord rec = classify_zero(f, origin);
    CHECK(rec.classification == ZeroClass::indeterminate);
    CHECK(rec.local_degree.value_or(99) == 0);
  }
  SUBCASE("d = 2 nonzero winding: (xi1^3, xi2) is degenerate stable") {
    SparsePoly s1(2);
    s1.add_term({3, 0}, 1.0);
    SparsePoly s2(2);
    s2.add_term({0, 1}, 1.0);
    ReducedField f = ReducedField::from_components({s1, s2});
    double origin[2] = {0.0, 0.0};
    ZeroRecord rec = classify_zero(f, origin);
    CHECK(rec.classification == ZeroClass::degenerate_stable);
    CHECK(rec.local_degree.value_or(0) == 1);
  }
  SUBCASE("d = 1 sign change: xi^3 is degenerate stable") {
    SparsePoly s(1);
    s.add_term({3}, 1.0);
    ReducedField f = ReducedField::from_components({s});
    double origin[1] = {0.0};
    ZeroRecord rec = classify_zero(f, origin);
    CHECK(rec.classification == ZeroClass::degenerate_stable);
    CHECK(rec.local_degree.value_or(0) == 1);
  }
  SUBCASE("d = 1 no sign change: xi^2 is unstable") {
    SparsePoly s(1);
    s.add_term({2}, 1.0);
    ReducedField f = ReducedField::from_components({s});
    double origin[1] = {0.0};
    ZeroRecord rec = classify_zero(f, origin);
    CHECK(rec.classification == ZeroClass::degenerate_unstable);
    CHECK(rec.local_degree.value_or(99) == 0);
  }
}

TEST_CASE("classify_zero rejects points that are not zeros") {
  ReducedField f = worked_field();
  double not_a_zero[2] = {1.0, 1.0};
  CHECK_THROWS_AS(classify_zero(f, not_a_zero), NotAZero);
}

TEST_CASE("degree consistency: local degrees sum to the boundary winding") {
  ReducedField f = worked_field();
  ZeroSet zs = find_zeros(f);
  REQUIRE(zs.completeness == "complete");
  int sum = 0;
  for (const auto& z : zs.zeros) sum += z.local_degree.value_or(0);
  CHECK(sum == boundary_winding_number(f, zs.search_box));
}

TEST_CASE("identically-zero fields are reported, not searched") {
  const auto& b = testutil::example_bundle();
  SparsePoly h(2);
  h.add_term({4, 0}, 1.0);
  h.add_term({2, 2}, -6.0);
  h.add_term({0, 4}, 1.0);
  ZeroSet zs = find_zeros(reduce_field(h, b.table));
  CHECK(zs.field_identically_zero);
  CHECK(zs.zeros.empty());
  CHECK(zs.completeness == "heuristic");
}

TEST_CASE("explicit box and dimension guards") {
  ReducedField f = worked_field();
  ZeroFindOptions narrow;
  narrow.box_radius = 0.5;  // excludes both zeros
  ZeroSet zs = find_zeros(f, narrow);
  CHECK(zs.zeros.empty());
  CHECK(zs.completeness == "heuristic");  // user box below the certified radius
}
