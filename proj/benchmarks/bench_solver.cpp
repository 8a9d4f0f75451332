#include <benchmark/benchmark.h>

#include <Eigen/SparseLU>

#include "hmetric/curvature.hpp"
#include "hmetric/toda.hpp"

using namespace hmetric;

namespace {

// cyclic r = 4 with a smooth quartic differential; n_theta = (n_rho - 1) / 2
TodaProblem cyclic4(int n_rho) {
  const RDifferential q(4, {cplx(4.0, 0.0), cplx(2.0, 0.0), cplx(0.0, 1.2)});
  return make_problem({Kind::Cyclic, 4}, q, build_grid(0.95, n_rho, (n_rho - 1) / 2));
}

void BM_Residual(benchmark::State& state) {
  const ResidualModel model(cyclic4(static_cast<int>(state.range(0))));
  const Eigen::VectorXd x = model.initial_guess();
  for (auto _ : state) {
    Eigen::VectorXd r = model.residual(x);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * model.size());
}
BENCHMARK(BM_Residual)->Arg(65)->Arg(129)->Arg(257);

void BM_Jacobian(benchmark::State& state) {
  const ResidualModel model(cyclic4(static_cast<int>(state.range(0))));
  const Eigen::VectorXd x = model.initial_guess();
  for (auto _ : state) {
    auto J = model.jacobian(x);
    benchmark::DoNotOptimize(J.valuePtr());
  }
  state.SetItemsProcessed(state.iterations() * model.size());
}
BENCHMARK(BM_Jacobian)->Arg(65)->Arg(129)->Arg(257);

/// Numeric factorization only; the pattern analysis is shared across Newton steps.
void BM_Factorize(benchmark::State& state) {
  const ResidualModel model(cyclic4(static_cast<int>(state.range(0))));
  Eigen::SparseMatrix<double> J = model.jacobian(model.initial_guess());
  J.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(J);
  for (auto _ : state) {
    lu.factorize(J);
    benchmark::DoNotOptimize(lu.info());
  }
}
BENCHMARK(BM_Factorize)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const auto p = cyclic4(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto s = solve(p);
    benchmark::DoNotOptimize(s.residual);
  }
}
BENCHMARK(BM_Solve)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_DerivedGeometry(benchmark::State& state) {
  const auto s = solve(cyclic4(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const auto geom = compute_f_fields(s);
    auto b = bochner_residual(geom, 1);
    benchmark::DoNotOptimize(b.min_residual);
  }
}
BENCHMARK(BM_DerivedGeometry)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
