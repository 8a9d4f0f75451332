#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

#include "hmetric/errors.hpp"
#include "hmetric/toda.hpp"

namespace hmetric {

namespace {

using LU = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1.0 / (1 << 20);

struct NewtonOutcome {
  bool converged;
  int iterations;
  double residual;
};

double sup_norm(const Eigen::VectorXd& v) {
  return v.allFinite() ? v.lpNorm<Eigen::Infinity>() : INFINITY;
}

NewtonOutcome newton(const ResidualModel& model, Eigen::VectorXd& x, const SolverParams& prm,
                     LU& lu, bool& analyzed) {
  // boundary rows are linear; start on the Dirichlet data
  const int N = model.nodes();
  for (int f = 0; f < model.unknowns(); ++f)
    for (int i = 0; i < N; ++i)
      if (model.laplacian().dirichlet(i)) x[f * N + i] = model.boundary_values()[f * N + i];

  Eigen::VectorXd R = model.residual(x);
  double res = sup_norm(R);
  int it = 0;
  while (res > std::max(prm.tolerance, model.roundoff_floor(x))) {
    if (it >= prm.max_iterations) return {false, it, res};
    Eigen::SparseMatrix<double> J = model.jacobian(x);
    J.makeCompressed();
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) return {false, it, res};
    const Eigen::VectorXd dx = lu.solve(-R);
    if (!dx.allFinite()) return {false, it, res};
    ++it;
    double alpha = 1.0;
    for (;;) {
      Eigen::VectorXd trial = x + alpha * dx;
      Eigen::VectorXd Rt = model.residual(trial);
      const double rt = sup_norm(Rt);
      if (rt <= (1.0 - kArmijo * alpha) * res) {
        x.swap(trial);
        R.swap(Rt);
        res = rt;
        break;
      }
      alpha *= 0.5;
      if (alpha < kMinStep) return {false, it, res};
    }
  }
  return {true, it, res};
}

std::vector<ScalarField> split(const GridPtr& g, const Eigen::VectorXd& x, int n) {
  std::vector<ScalarField> out;
  const int N = g->size();
  for (int f = 0; f < n; ++f) out.emplace_back(g, Eigen::VectorXd(x.segment(f * N, N)));
  return out;
}

Eigen::VectorXd stack(const std::vector<ScalarField>& fields) {
  const int N = fields.front().size();
  Eigen::VectorXd x(N * static_cast<Eigen::Index>(fields.size()));
  for (size_t f = 0; f < fields.size(); ++f) x.segment(f * N, N) = fields[f].values;
  return x;
}

void fill_weights(Solution& s) {
  LocalSystem sys(s.kind);
  const int N = s.grid->size();
  s.weights.assign(s.kind.weights(), ScalarField(s.grid));
  std::vector<double> w(sys.size());
  for (int i = 0; i < N; ++i) {
    for (int f = 0; f < sys.size(); ++f) w[f] = s.unknowns[f][i];
    const auto full = sys.expand(w);
    for (size_t f = 0; f < full.size(); ++f) s.weights[f][i] = full[f];
  }
}

}  // namespace

bool converged(const Solution& s) {
  return s.residual <= std::max(s.params.tolerance, s.roundoff_floor);
}

Solution solve(const TodaProblem& p) {
  Solution out;
  out.kind = p.kind;
  out.q = p.q;
  out.grid = p.grid;
  out.params = p.params;

  LU lu;
  bool analyzed = false;
  const bool trivial = p.q.is_zero();

  double t_done = 0.0;
  double dt = trivial ? 1.0 : 1.0 / p.params.continuation_steps;
  int refinements = 0;
  Eigen::VectorXd x_done;
  Eigen::VectorXd x;
  double last_res = 0.0;
  while (t_done < 1.0) {
    const double t = std::min(1.0, t_done + dt);
    ResidualModel model(p, trivial ? 1.0 : t);
    x = x_done.size() ? x_done : model.initial_guess();
    const auto o = newton(model, x, p.params, lu, analyzed);
    out.trace.push_back({t, o.iterations, o.residual, o.converged});
    out.newton_iterations += o.iterations;
    last_res = o.residual;
    if (o.converged) {
      t_done = (1.0 - t) < 1e-15 ? 1.0 : t;
      x_done = x;
      continue;
    }
    if (trivial || refinements >= p.params.max_refinements) {
      std::ostringstream msg;
      msg << "newton failed at amplitude " << t << " after " << o.iterations
          << " iterations, residual " << o.residual;
      throw SolverError(msg.str());
    }
    ++refinements;
    dt *= 0.5;
  }
  out.residual = last_res;
  out.roundoff_floor = ResidualModel(p, 1.0).roundoff_floor(x_done);
  out.unknowns = split(p.grid, x_done, p.kind.unknowns());
  fill_weights(out);
  return out;
}

Solution assemble_solution(const TodaProblem& p, std::vector<ScalarField> unknowns) {
  if (static_cast<int>(unknowns.size()) != p.kind.unknowns())
    throw ConfigError("wrong number of fields for this problem");
  for (const auto& u : unknowns)
    if (!u.grid || !(*u.grid == *p.grid)) throw ConfigError("field grid does not match problem");
  Solution out;
  out.kind = p.kind;
  out.q = p.q;
  out.grid = p.grid;
  out.params = p.params;
  out.unknowns = std::move(unknowns);
  ResidualModel model(p, 1.0);
  const Eigen::VectorXd x = stack(out.unknowns);
  out.residual = sup_norm(model.residual(x));
  out.roundoff_floor = model.roundoff_floor(x);
  fill_weights(out);
  return out;
}

Solution solve_radial(const TodaProblem& p, int factor) {
  if (!radial_reduce(p.q)) throw ConfigError("q is not a monomial; no radial reduction");
  if (factor < 1) throw ConfigError("refinement factor must be positive");
  const auto& g = *p.grid;
  auto fine = build_grid(g.radius(), factor * (g.n_rho() - 1) + 1, 1, g.grading());
  TodaProblem rp = p;
  rp.grid = fine;
  return solve(rp);
}

}  // namespace hmetric
