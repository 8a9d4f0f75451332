#include <doctest.h>

#include <cmath>

#include "hmetric/equivalence.hpp"
#include "hmetric/errors.hpp"

using namespace hmetric;

TEST_SUITE("equivalence-verifier") {

TEST_CASE("fuchsian report carries the closed-form witnesses") {
  // the sectional witness is -1/100 here, so the grid must make eps_h smaller
  auto g = build_grid(0.95, 65, 32);
  auto rep = bounded_equivalence_report(solve(make_problem({Kind::Cyclic, 5}, RDifferential::zero(5), g)));
  CHECK(rep.verdict == "all-witnessed");
  CHECK(rep.condition("curvature_n_negative").value == doctest::Approx(4.0 / 6.0 - rep.tol.eps));
  CHECK_FALSE(rep.condition("curvature_n_minus_1_negative").applicable);
  CHECK(rep.condition("chain_gap_some").applicable);
  CHECK(rep.scalars.at("sup_q") == 0.0);
  CHECK(rep.hypothesis.find("boundary ansatz") != std::string::npos);
  CHECK_FALSE(rep.notes.empty());
}

TEST_CASE("rank preconditions") {
  auto g = build_grid(0.95, 17, 8);
  auto s = solve(make_problem({Kind::Cyclic, 2}, RDifferential::zero(2), g));
  CHECK_THROWS_AS(bounded_equivalence_report(s), ConfigError);
  CHECK_FALSE(has_equivalence_report({Kind::Subcyclic, 3}));
  ProblemKind v{Kind::Vortex, 2};
  v.vortex.c = 0.3;
  CHECK_FALSE(has_equivalence_report(v));
}

TEST_CASE("vortex report at q = 0") {
  auto g = build_grid(0.95, 33, 16);
  auto rep = vortex_report(solve(make_problem({Kind::Vortex, 2}, RDifferential::zero(2), g)));
  CHECK(rep.scalars.at("sup_curvature") == doctest::Approx(-4.0));
  CHECK(rep.scalars.at("ratio_margin") == 1.0);
  CHECK(rep.verdict == "all-witnessed");
}

TEST_CASE("trend classification") {
  using S = Condition::Sense;
  CHECK(classify_trend(S::Gap, {0.5, 0.49, 0.495}) == "stable");
  CHECK(classify_trend(S::Gap, {0.5, 0.3, 0.1}) == "degenerating");
  CHECK(classify_trend(S::Gap, {0.5, 0.45, 0.44}) == "inconclusive");
  CHECK(classify_trend(S::Gap, {-0.001, -0.003, -0.002}) == "degenerating");
  CHECK(classify_trend(S::Gap, {-0.001, 0.003, -0.002}) == "inconclusive");
  CHECK(classify_trend(S::Bound, {1.0, 10.0, 100.0}) == "degenerating");
  CHECK(classify_trend(S::Bound, {2.0, 2.0, 2.01}) == "stable");
  CHECK(classify_trend(S::Bound, {2.0, 1.0, 3.0}) == "inconclusive");
}

TEST_CASE("q = 0 refinement shows no change") {
  auto g = build_grid(0.95, 17, 8);
  auto t = refinement_study(make_problem({Kind::Cyclic, 4}, RDifferential::zero(4), g), 2);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].change == 0.0);
  CHECK(std::isnan(t.rows[1].change));
}

TEST_CASE("report json is deterministic") {
  auto g = build_grid(0.95, 33, 16);
  auto p = make_problem({Kind::Cyclic, 3}, RDifferential(3, {1.0, 0.5}), g);
  auto a = to_json(bounded_equivalence_report(solve(p))).dump();
  auto b = to_json(bounded_equivalence_report(solve(p))).dump();
  CHECK(a == b);
}

}
