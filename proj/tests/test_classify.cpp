#include <doctest.h>

#include <cmath>

#include "peakcount/classify.hpp"
#include "peakcount/errors.hpp"
#include "test_helpers.hpp"

using namespace peakcount;

namespace {

RunConfig worked_config() {
  RunConfig cfg;
  cfg.p = 2.0;
  cfg.dim = 3;
  cfg.profile = testutil::example_profile_57();
  return cfg;
}

}  // namespace

TEST_CASE("worked profile classifies as exactly two") {
  ClassificationReport rep = classify_domain(worked_config());
  CHECK(rep.exact);
  CHECK(rep.predicted_count == 2);
  CHECK(rep.count_lower_bound == 2);
  CHECK(rep.xi_set.size() == 2);
  CHECK(rep.conditions.flatness_holds);
  CHECK(rep.conditions.all_nondegenerate);
  CHECK(rep.conditions.search_complete);
  CHECK_FALSE(rep.conditions.indeterminate_zeros_present);
  CHECK_FALSE(rep.conditions.odd_monomial_shortcut);
}

TEST_CASE("odd axis-monomial shortcut predicts zero solutions") {
  RunConfig cfg;
  cfg.p = 2.0;
  cfg.dim = 3;
  SparsePoly q(2);
  q.add_term({3, 0}, 2.0);
  q.add_term({0, 4}, 1.0);
  cfg.profile = q;

  ClassificationReport rep = classify_domain(cfg);
  CHECK(rep.exact);
  CHECK(rep.predicted_count == 0);
  CHECK(rep.shortcut == "proposition_odd_monomial");
  CHECK(rep.conditions.odd_monomial_shortcut);
  CHECK(rep.conditions.flatness_holds);

  SUBCASE("full pipeline agrees with the shortcut") {
    ClassifyOptions opts;
    opts.force_full_pipeline = true;
    ClassificationReport pipe = classify_domain(cfg, opts);
    CHECK(pipe.predicted_count == 0);
    CHECK(pipe.count_lower_bound == 0);
    REQUIRE(pipe.zeros.has_value());
    CHECK(pipe.zeros->zeros.empty());
    // L_1 = 6 c2 everywhere; the grid minimum stays bounded away from zero.
    double c2 = pipe.c_values[2];
    CHECK(pipe.zeros->min_norm_on_grid >= 2.9 * c2);
  }
}

TEST_CASE("harmonic profile degrades to a lower-bound verdict") {
  RunConfig cfg;
  cfg.p = 2.0;
  cfg.dim = 3;
  SparsePoly h(2);
  h.add_term({4, 0}, 1.0);
  h.add_term({2, 2}, -6.0);
  h.add_term({0, 4}, 1.0);
  cfg.profile = h;

  ClassificationReport rep = classify_domain(cfg);
  CHECK_FALSE(rep.exact);
  CHECK(rep.predicted_count == -1);
  CHECK(rep.count_lower_bound == 0);
  CHECK_FALSE(rep.conditions.flatness_holds);
  CHECK(rep.conditions.field_identically_zero);
  CHECK_FALSE(rep.conditions.finite_zero_hypothesis);
  CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("report invariant: exact implies the certifying conditions") {
  for (bool odd : {false, true}) {
    RunConfig cfg;
    cfg.p = 2.0;
    cfg.dim = 3;
    if (odd) {
      SparsePoly q(2);
      q.add_term({3, 0}, 2.0);
      q.add_term({0, 4}, 1.0);
      cfg.profile = q;
    } else {
      cfg.profile = testutil::example_profile_57();
    }
    ClassificationReport rep = classify_domain(cfg);
    if (rep.exact) {
      CHECK(rep.conditions.flatness_holds);
      CHECK(rep.conditions.all_nondegenerate);
      CHECK_FALSE(rep.conditions.indeterminate_zeros_present);
    }
  }
}

TEST_CASE("curvature order analysis") {
  auto order_of = [](std::initializer_list<std::pair<int, double>> terms) {
    SparsePoly psi(1);
    for (auto [d, c] : terms) psi.add_term({d}, c);
    return curvature_order(psi);
  };
  SUBCASE("t^4: m = 2, exactly one") {
    auto ca = order_of({{4, 1.0}});
    CHECK(ca.n == 4);
    CHECK(ca.m == 2);
    CHECK(ca.verdict == CurvatureVerdict::exactly_one);
  }
  SUBCASE("t^5: m = 3, none") {
    auto ca = order_of({{5, 1.0}});
    CHECK(ca.n == 5);
    CHECK(ca.m == 3);
    CHECK(ca.verdict == CurvatureVerdict::no_solution);
  }
  SUBCASE("t^3 + t^4: the lowest term dominates") {
    auto ca = order_of({{3, 1.0}, {4, 1.0}});
    CHECK(ca.n == 3);
    CHECK(ca.m == 1);
    CHECK(ca.verdict == CurvatureVerdict::no_solution);
  }
  SUBCASE("t^2: nonvanishing curvature, outside scope") {
    auto ca = order_of({{2, 1.0}});
    CHECK(ca.m == 0);
    CHECK(ca.verdict == CurvatureVerdict::outside_scope);
  }
  SUBCASE("errors") {
    SparsePoly zero(1);
    CHECK_THROWS_AS(curvature_order(zero), DegeneratePsi);
    SparsePoly shifted(1);
    shifted.add_term({0}, 1.0);
    shifted.add_term({4}, 1.0);
    CHECK_THROWS_AS(curvature_order(shifted), InvalidParams);
    SparsePoly sloped(1);
    sloped.add_term({1}, 0.5);
    sloped.add_term({4}, 1.0);
    CHECK_THROWS_AS(curvature_order(sloped), InvalidParams);
  }
}

TEST_CASE("plane-curve curvature formula") {
  SparsePoly t4(1);
  t4.add_term({4}, 1.0);
  CHECK(mean_curvature_eval(t4, 0.0) == 0.0);
  CHECK(mean_curvature_eval(t4, 1.0) ==
        doctest::Approx(12.0 / std::pow(17.0, 1.5)).epsilon(1e-14));
  SparsePoly half_t2(1);
  half_t2.add_term({2}, 0.5);
  CHECK(mean_curvature_eval(half_t2, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("curvature route and reduction route agree for t^n") {
  for (int n : {4, 5, 6, 7}) {
    SparsePoly psi(1);
    psi.add_term({n}, 1.0);
    CHECK(crosscheck_1d(psi, 3.0));

    RunConfig cfg;
    cfg.p = 3.0;
    cfg.dim = 2;
    cfg.psi = psi;
    ClassificationReport rep = classify_domain(cfg);
    long expected = (n % 2 == 0) ? 1 : 0;
    CHECK(rep.exact);
    CHECK(rep.predicted_count == expected);
    REQUIRE(rep.curvature.has_value());
    CHECK(rep.curvature->n == n);
    CHECK(rep.curvature->m == n - 2);
  }
}

TEST_CASE("psi with nonvanishing curvature is reported outside scope") {
  RunConfig cfg;
  cfg.p = 3.0;
  cfg.dim = 2;
  SparsePoly t2(1);
  t2.add_term({2}, 1.0);
  cfg.psi = t2;
  ClassificationReport rep = classify_domain(cfg);
  CHECK_FALSE(rep.exact);
  CHECK(rep.predicted_count == -1);
  REQUIRE(rep.curvature.has_value());
  CHECK(rep.curvature->verdict == CurvatureVerdict::outside_scope);
  CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("stable-zero bookkeeping ignores indeterminate records") {
  ZeroSet zs;
  ZeroRecord stable;
  stable.classification = ZeroClass::nondegenerate_stable;
  ZeroRecord degenerate;
  degenerate.classification = ZeroClass::degenerate_stable;
  ZeroRecord vague;
  vague.classification = ZeroClass::indeterminate;
  zs.zeros = {stable, degenerate, vague};
  CHECK(zs.stable_count() == 2);
  CHECK(zs.any_indeterminate());
}

TEST_CASE("configuration guards") {
  RunConfig cfg;
  cfg.p = 2.0;
  cfg.dim = 3;
  CHECK_THROWS_AS(classify_domain(cfg), StageError);  // neither profile nor psi

  cfg.profile = testutil::example_profile_57();
  SparsePoly psi(1);
  psi.add_term({4}, 1.0);
  cfg.psi = psi;
  CHECK_THROWS_AS(classify_domain(cfg), StageError);  // both

  RunConfig bad = worked_config();
  bad.dim = 4;  // profile has 2 variables, dim - 1 = 3
  CHECK_THROWS_AS(classify_domain(bad), StageError);

  RunConfig low = worked_config();
  SparsePoly q2(1);
  q2.add_term({2}, 1.0);
  low.dim = 2;
  low.profile = q2;
  CHECK_THROWS_AS(classify_domain(low), StageError);  // alpha < 3 gate
}

TEST_CASE("stage attribution names the failing stage") {
  RunConfig cfg = worked_config();
  cfg.p = 7.0;  // supercritical for N = 3
  try {
    classify_domain(cfg);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "params");
  }
}
