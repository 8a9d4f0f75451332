#include <doctest.h>

#include <cmath>

#include "hmetric/errors.hpp"
#include "hmetric/geometry.hpp"

using namespace hmetric;

TEST_SUITE("geometry") {

TEST_CASE("density is 4 at the origin and blows up at the circle") {
  CHECK(hyperbolic_density({0.0, 0.0}) == doctest::Approx(4.0));
  CHECK(hyperbolic_density({0.5, 0.0}) == doctest::Approx(4.0 / (0.75 * 0.75)));
  CHECK_THROWS_AS(hyperbolic_density({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(hyperbolic_density({0.8, 0.8}), DomainError);
}

TEST_CASE("norm of q uses lambda^r") {
  const auto q = RDifferential::monomial(3, 1, {2.0, 0.0});
  const cplx z(0.3, -0.4);
  const double lam = hyperbolic_density(z);
  CHECK(q.norm_sq(z) == doctest::Approx(4.0 * std::norm(z) / std::pow(lam, 3)));
  CHECK(RDifferential::zero(4).is_zero());
  CHECK(RDifferential::zero(4).norm_sq(z) == 0.0);
}

TEST_CASE("denominator is normalised to be monic") {
  RDifferential q(2, {cplx(2.0, 0.0)}, {cplx(2.0, 0.0), cplx(-2.0, 0.0)});
  CHECK(q.denominator().back() == cplx(1.0, 0.0));
  CHECK(std::abs(q.eval({0.5, 0.0}) - cplx(2.0 / (2.0 - 1.0) / 0.5 * 0.5, 0.0)) < 1e-14);
}

TEST_CASE("poles inside the disk are rejected, boundary poles accepted") {
  CHECK_THROWS_AS(RDifferential(3, {1.0}, {cplx(-0.5, 0.0), cplx(1.0, 0.0)}), DomainError);
  // (1 - z)^-4: fourfold root on the circle
  CHECK_NOTHROW(RDifferential(3, {1.0}, {1.0, -4.0, 6.0, -4.0, 1.0}));
  CHECK_NOTHROW(RDifferential(2, {1.0}, {cplx(-2.0, 0.0), cplx(1.0, 0.0)}));
}

TEST_CASE("monomial detection") {
  auto m = RDifferential::monomial(4, 2, {0.5, 0.1}).as_monomial();
  REQUIRE(m);
  CHECK(m->power == 2);
  CHECK(m->coefficient == cplx(0.5, 0.1));
  CHECK_FALSE(RDifferential(3, {1.0, 1.0}).as_monomial());
  CHECK_FALSE(RDifferential(3, {1.0}, {1.0, -1.0}).as_monomial());
}

TEST_CASE("polynomial roots") {
  auto r = polynomial_roots({cplx(-2.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(std::abs(r[0]) - std::sqrt(2.0)) < 1e-12);
  CHECK(polynomial_roots({cplx(3.0, 0.0)}).empty());
}

TEST_CASE("json round trip and unknown keys") {
  RDifferential q(3, {cplx(1.0, 0.5), cplx(0.0, -2.0)}, {cplx(2.0, 0.0), cplx(-1.0, 0.0)});
  nlohmann::json j = q;
  CHECK(j.get<RDifferential>() == q);
  nlohmann::json bad = {{"order", 3}, {"numerator", {1.0}}, {"degree", 2}};
  CHECK_THROWS_WITH_AS(bad.get<RDifferential>(), doctest::Contains("degree"), ConfigError);
}

}
