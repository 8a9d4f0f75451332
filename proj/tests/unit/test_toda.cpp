#include <doctest.h>

#include <cmath>
#include <random>

#include "hmetric/errors.hpp"
#include "hmetric/toda.hpp"

using namespace hmetric;

namespace {

ProblemKind g2(G2Mode m) {
  ProblemKind k{Kind::G2, 7};
  k.g2_mode = m;
  return k;
}

double fd_mismatch(const TodaProblem& p, unsigned seed) {
  ResidualModel model(p);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  Eigen::VectorXd x = model.initial_guess();
  for (int i = 0; i < x.size(); ++i) x[i] += u(rng);
  Eigen::VectorXd v(x.size());
  for (int i = 0; i < v.size(); ++i) v[i] = u(rng);
  const double eps = 1e-6;
  Eigen::VectorXd fd = (model.residual(x + eps * v) - model.residual(x - eps * v)) / (2 * eps);
  Eigen::VectorXd jv = model.jacobian(x) * v;
  return (jv - fd).norm() / jv.norm();
}

}  // namespace

TEST_SUITE("toda-solver") {

TEST_CASE("preconditions") {
  auto g = build_grid(0.9, 17, 8);
  CHECK_THROWS_WITH_AS(make_problem({Kind::Cyclic, 2}, RDifferential::zero(3), g),
                       "order must equal rank for cyclic", ConfigError);
  CHECK_THROWS_AS(make_problem({Kind::Subcyclic, 4}, RDifferential::zero(4), g), ConfigError);
  CHECK_THROWS_AS(make_problem({Kind::Wang, 3}, RDifferential::zero(2), g), ConfigError);
  ProblemKind v{Kind::Vortex, 2};
  v.vortex.a = 0.0;
  CHECK_THROWS_AS(make_problem(v, RDifferential::zero(2), g), ConfigError);
  SolverParams bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(make_problem({Kind::Cyclic, 3}, RDifferential::zero(3), g, bad), ConfigError);
}

TEST_CASE("fuchsian constants solve the algebraic system") {
  for (int r = 2; r <= 8; ++r)
    for (Kind k : {Kind::Cyclic, Kind::Subcyclic}) {
      if (k == Kind::Subcyclic && r < 3) continue;
      LocalSystem sys({k, r});
      auto w = sys.fuchsian();
      std::vector<double> rhs(sys.size()), jac(sys.size() * sys.size());
      sys.eval(w.data(), 0.0, rhs.data(), jac.data());
      for (double x : rhs) CHECK(std::abs(x) < 1e-13);
    }
}

TEST_CASE("algebraic root follows s") {
  LocalSystem sys({Kind::Cyclic, 4});
  for (double s : {0.0, 0.1, 1.0, 100.0}) {
    auto w = sys.algebraic_root(s);
    std::vector<double> rhs(sys.size()), jac(sys.size() * sys.size());
    sys.eval(w.data(), s, rhs.data(), jac.data());
    for (double x : rhs) CHECK(std::abs(x) < 1e-10);
  }
}

TEST_CASE("q = 0 needs no Newton step") {
  auto g = build_grid(0.9, 33, 16);
  auto s = solve(make_problem({Kind::Cyclic, 5}, RDifferential::zero(5), g));
  CHECK(s.newton_iterations == 0);
  CHECK(s.residual < 1e-12);
}

TEST_CASE("jacobian matches central differences for every family") {
  auto g = build_grid(0.9, 17, 8);
  const auto q = [](int order) { return RDifferential(order, {cplx(0.8, 0.1), cplx(0.3, 0.0)}); };
  std::vector<TodaProblem> problems{
      make_problem({Kind::Cyclic, 2}, q(2), g),       make_problem({Kind::Cyclic, 5}, q(5), g),
      make_problem({Kind::Subcyclic, 3}, q(2), g),    make_problem({Kind::Subcyclic, 6}, q(5), g),
      make_problem({Kind::Vortex, 2}, q(2), g),       make_problem({Kind::Wang, 3}, q(3), g),
      make_problem({Kind::Maximal, 4}, q(4), g),      make_problem(g2(G2Mode::Constrained), q(6), g),
      make_problem(g2(G2Mode::Unconstrained), q(6), g)};
  for (const auto& p : problems)
    for (unsigned seed = 1; seed <= 3; ++seed) CHECK(fd_mismatch(p, seed) < 1e-6);
}

TEST_CASE("bounded q converges and the continuation trace ends at 1") {
  auto g = build_grid(0.95, 33, 16);
  auto s = solve(make_problem({Kind::Subcyclic, 5}, RDifferential(4, {cplx(4.0, 0.0), cplx(1.0, 1.0)}), g));
  CHECK(converged(s));
  REQUIRE_FALSE(s.trace.empty());
  CHECK(s.trace.back().amplitude == 1.0);
  CHECK(s.weights.size() == 2);
}

TEST_CASE("assemble_solution reproduces the solve") {
  auto g = build_grid(0.95, 33, 16);
  auto p = make_problem({Kind::Cyclic, 3}, RDifferential(3, {1.0, 0.5}), g);
  auto s = solve(p);
  auto a = assemble_solution(p, s.unknowns);
  CHECK(a.residual == s.residual);
  CHECK(a.weights[0].values == s.weights[0].values);
}

TEST_CASE("radial solve matches 2D on shared rings") {
  auto g = build_grid(0.9, 33, 16);
  auto p = make_problem({Kind::Cyclic, 2}, RDifferential::monomial(2, 0, {0.3, 0.0}), g);
  auto s = solve(p);
  auto r = solve_radial(p, 1);
  double err = 0.0;
  for (int i = 0; i < g->size(); ++i) err = std::max(err, std::abs(s.unknowns[0][i] - r.unknowns[0][g->ring(i)]));
  CHECK(err < 1e-9);
  CHECK_THROWS_AS(solve_radial(make_problem({Kind::Cyclic, 2}, RDifferential(2, {1.0, 1.0}), g), 2), ConfigError);
}

}
