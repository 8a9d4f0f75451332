#include <doctest.h>

#include <cmath>

#include "hmetric/errors.hpp"
#include "hmetric/grid.hpp"

using namespace hmetric;

TEST_SUITE("discretization") {

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(build_grid(1.0, 32, 16), DomainError);
  CHECK_THROWS_AS(build_grid(0.9, 8, 16), ConfigError);
  CHECK_THROWS_AS(build_grid(0.9, 32, 4), ConfigError);
  CHECK_NOTHROW(build_grid(0.9, 32, 1));
}

TEST_CASE("geodesic grading ends on R") {
  auto g = build_grid(0.95, 33, 16);
  CHECK(g->rho(0) == 0.0);
  CHECK(g->rho(32) == doctest::Approx(0.95).epsilon(1e-14));
  CHECK(g->h() == doctest::Approx(std::atanh(0.95) / 32));
  auto u = build_grid(0.95, 33, 16, RadialGrading::Uniform);
  CHECK(u->rho(16) == doctest::Approx(0.475));
}

TEST_CASE("laplacian kills constants and is second order on a smooth field") {
  for (auto grading : {RadialGrading::Geodesic, RadialGrading::Uniform}) {
    double prev = 0.0, prev1 = 0.0;
    for (int n : {33, 65}) {
      auto g = build_grid(0.8, n, n / 2, grading);
      auto lap = laplace_beltrami(g);
      ScalarField one(g, 1.0);
      CHECK(sup_abs(lap.apply(one), Region::Interior) < 1e-10);
      // Delta_flat (|z|^4 + x^3) = 16 |z|^2 + 6 x and Delta_gD = Delta_flat / (4 lambda)
      auto f = sample(g, [](cplx z) { return std::norm(z) * std::norm(z) + std::pow(z.real(), 3); });
      auto lf = lap.apply(f);
      // the f'/rho term has an O(h) truncation error on ring 1 for cubic
      // terms, so second order is checked away from the origin
      double err = 0.0, err1 = 0.0;
      for (int i = 0; i < g->size(); ++i) {
        if (g->is_boundary(i)) continue;
        const double e = std::abs(lf[i] - (16.0 * std::norm(g->z(i)) + 6.0 * g->z(i).real()) / (4.0 * g->density(i)));
        if (g->rho(g->ring(i)) >= 0.2) err = std::max(err, e);
        else if (g->ring(i) == 1) err1 = std::max(err1, e);
      }
      if (prev > 0.0) {
        CHECK(prev / err > 3.0);
        CHECK(prev1 / err1 > 1.8);
      }
      prev = err;
      prev1 = err1;
    }
  }
}

TEST_CASE("background curvature is -1 to O(h^2)") {
  auto a = build_grid(0.95, 33, 16);
  auto b = build_grid(0.95, 65, 32);
  auto ka = discrete_curvature(density_field(a), FactorConvention::Absolute);
  auto kb = discrete_curvature(density_field(b), FactorConvention::Absolute);
  double ea = 0.0, eb = 0.0;
  for (int i = 0; i < a->size(); ++i)
    if (!a->is_boundary(i)) ea = std::max(ea, std::abs(ka[i] + 1.0));
  for (int i = 0; i < b->size(); ++i)
    if (!b->is_boundary(i)) eb = std::max(eb, std::abs(kb[i] + 1.0));
  CHECK(ea / eb > 3.5);
  CHECK(std::isnan(ka[a->index(32, 0)]));
  // constant factor in the background convention: exactly -1
  auto kc = discrete_curvature(ScalarField(a, 1.0), FactorConvention::Background);
  CHECK(sup_abs(ScalarField(a, kc.values.array() + 1.0), Region::Interior) < 1e-12);
}

TEST_CASE("matrix agrees with apply") {
  auto g = build_grid(0.9, 17, 8);
  auto lap = laplace_beltrami(g);
  auto f = sample(g, [](cplx z) { return std::exp(z.real()) * std::cos(z.imag()); });
  Eigen::VectorXd a = lap.matrix() * f.values;
  Eigen::VectorXd b = lap.apply(f.values);
  CHECK((a - b).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("radial reduction and interpolation") {
  CHECK(radial_reduce(RDifferential::monomial(3, 2, {1.0, 0.0})));
  CHECK_FALSE(radial_reduce(RDifferential(3, {1.0, 1.0})));
  auto g = build_grid(0.9, 17, 1);
  auto f = sample(g, [](cplx z) { return std::abs(z); });
  CHECK(radial_interpolate(f, 0.45) == doctest::Approx(0.45));
}

TEST_CASE("csv round trip is lossless") {
  auto g = build_grid(0.9, 17, 8);
  auto f = sample(g, [](cplx z) { return std::sin(3.0 * z.real()) / 7.0 + z.imag(); });
  const auto text = field_to_csv(f);
  CHECK(text.rfind("rho,theta,x,y,value\n", 0) == 0);
  auto back = field_from_csv(text, g);
  CHECK(back.values == f.values);
}

TEST_CASE("q norm sup") {
  auto g = build_grid(0.95, 33, 16);
  auto s = sup_q_norm(RDifferential::monomial(3, 0, {1.0, 0.0}), g);
  CHECK(s.value == doctest::Approx(1.0 / 64.0));
  CHECK(s.rho == 0.0);
}

}
