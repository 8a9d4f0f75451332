#include <doctest.h>

#include <cmath>

#include "hmetric/curvature.hpp"
#include "hmetric/errors.hpp"

using namespace hmetric;

TEST_SUITE("curvature-analysis") {

TEST_CASE("fuchsian f-fields and curvatures") {
  auto g = build_grid(0.95, 33, 16);
  for (int r = 3; r <= 6; ++r) {
    auto s = solve(make_problem({Kind::Cyclic, r}, RDifferential::zero(r), g));
    auto geom = compute_f_fields(s);
    for (int i = 1; i <= geom.n; ++i) {
      const double fi = i * (r - i) / 4.0;
      CHECK(sup_abs(ScalarField(g, geom[i].values.array() - fi)) < 1e-12);
      auto K = curvature_closed_form(geom, i);
      CHECK(max_value(K) == doctest::Approx(-1.0 / fi));
      CHECK(sup_abs(curvature_cross_check(geom, i), Region::Interior) < 1e-10);
    }
    CHECK(max_value(energy_density(geom)) == doctest::Approx(r * r * (r * r - 1) / 12.0));
  }
}

TEST_CASE("sectional curvature needs the immersed regime") {
  auto g = build_grid(0.95, 17, 8);
  auto s2 = solve(make_problem({Kind::Cyclic, 2}, RDifferential::zero(2), g));
  CHECK_FALSE(sectional_applicable(compute_f_fields(s2)));
  CHECK_THROWS_AS(sectional_curvature(compute_f_fields(s2)), ConfigError);
  auto s3 = solve(make_problem({Kind::Subcyclic, 3}, RDifferential::zero(2), g));
  CHECK_THROWS_AS(sectional_curvature(compute_f_fields(s3)), ConfigError);
}

TEST_CASE("bochner table") {
  CHECK(bochner_constants(Kind::Cyclic, 3, 1).claimed);
  CHECK(bochner_constants(Kind::Cyclic, 3, 1).c1 == 1.5);
  CHECK(bochner_constants(Kind::Cyclic, 3, 1).c2 == 2.0);
  CHECK(bochner_constants(Kind::Cyclic, 7, 3).conditional);
  CHECK_FALSE(bochner_constants(Kind::Cyclic, 8, 2).claimed);
  CHECK(bochner_constants(Kind::Subcyclic, 4, 2).c1 == 0.75);
  CHECK(bochner_table_json().at("cases").is_array());
}

TEST_CASE("closed form matches discrete curvature on a bounded solve") {
  auto g = build_grid(0.95, 33, 16);
  for (auto [k, r] : {std::pair{Kind::Cyclic, 4}, std::pair{Kind::Subcyclic, 6}}) {
    const int order = k == Kind::Cyclic ? r : r - 1;
    auto s = solve(make_problem({k, r}, RDifferential(order, {cplx(8.0, 0.0), cplx(2.0, 1.0)}), g));
    auto geom = compute_f_fields(s);
    for (int i = 1; i <= geom.n; ++i)
      CHECK(sup_abs(curvature_cross_check(geom, i), Region::Interior) < 1e-8);
  }
}

TEST_CASE("harmonic map quantities at q = 0") {
  auto g = build_grid(0.95, 33, 16);
  ProblemKind v{Kind::Vortex, 2};
  auto s = solve(make_problem(v, RDifferential::zero(2), g));
  auto hm = harmonic_map_quantities(s);
  CHECK(max_value(hm.H) == doctest::Approx(0.25));
  CHECK(min_value(hm.H) == doctest::Approx(0.25));
  CHECK(max_value(hm.dilatation) == 0.0);
  CHECK(max_value(vortex_curvature(s)) == doctest::Approx(-4.0));
}

TEST_CASE("wang at q = 0 is exact") {
  auto g = build_grid(0.95, 33, 16);
  auto s = solve(make_problem({Kind::Wang, 3}, RDifferential::zero(3), g));
  CHECK(sup_abs(s.weights[0]) == 0.0);
  CHECK(max_value(blaschke_curvature(s)) == -1.0);
}

TEST_CASE("maximal and g2 geometry") {
  auto g = build_grid(0.95, 33, 16);
  auto m = maximal_geometry(solve(make_problem({Kind::Maximal, 4}, RDifferential(4, {4.0, 1.0}), g)));
  CHECK(m.gauss_discrepancy < 1e-6);
  CHECK(min_value(m.k) >= -1.0);
  auto q = RDifferential(6, {32.0, 8.0});
  auto c = g2_geometry(solve(make_problem({Kind::G2, 7}, q, g)));
  CHECK(c.constraint_gap < 1e-12);
  CHECK(c.k_min >= -1.0);
  CHECK(c.gauss_discrepancy < 1e-6);
}

TEST_CASE("tolerance scales like h^2") {
  auto a = calibrate_tolerance(build_grid(0.95, 33, 16));
  auto b = calibrate_tolerance(build_grid(0.95, 65, 32));
  CHECK(a.eps / b.eps == doctest::Approx(4.0).epsilon(0.1));
  CHECK(a.eps == doctest::Approx(a.C * a.h * a.h));
}

}
