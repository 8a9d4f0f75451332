#include "hmetric/toda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "hmetric/errors.hpp"

namespace hmetric {

// rounding errors of the row terms add up well below their plain sum
constexpr double kRoundoffFactor = 1.0;

const char* to_string(Kind k) {
  switch (k) {
    case Kind::Cyclic: return "cyclic";
    case Kind::Subcyclic: return "subcyclic";
    case Kind::Vortex: return "vortex";
    case Kind::Wang: return "wang";
    case Kind::Maximal: return "maximal";
    case Kind::G2: return "g2";
  }
  return "?";
}

Kind kind_from_string(const std::string& s) {
  if (s == "cyclic") return Kind::Cyclic;
  if (s == "subcyclic") return Kind::Subcyclic;
  if (s == "vortex") return Kind::Vortex;
  if (s == "wang") return Kind::Wang;
  if (s == "maximal") return Kind::Maximal;
  if (s == "g2") return Kind::G2;
  throw ConfigError("unknown problem kind: " + s);
}

const char* to_string(G2Mode m) {
  return m == G2Mode::Constrained ? "constrained" : "unconstrained";
}

G2Mode g2_mode_from_string(const std::string& s) {
  if (s == "constrained") return G2Mode::Constrained;
  if (s == "unconstrained") return G2Mode::Unconstrained;
  throw ConfigError("unknown g2 mode: " + s);
}

int ProblemKind::unknowns() const {
  switch (kind) {
    case Kind::Cyclic:
    case Kind::Subcyclic: return rank / 2;
    case Kind::Vortex:
    case Kind::Wang: return 1;
    case Kind::Maximal: return 2;
    case Kind::G2: return g2_mode == G2Mode::Constrained ? 2 : 3;
  }
  return 1;
}

int ProblemKind::weights() const { return kind == Kind::G2 ? 3 : unknowns(); }

std::optional<int> ProblemKind::required_order() const {
  switch (kind) {
    case Kind::Cyclic: return rank;
    case Kind::Subcyclic: return rank - 1;
    case Kind::Vortex: return std::nullopt;
    case Kind::Wang: return 3;
    case Kind::Maximal: return 4;
    case Kind::G2: return 6;
  }
  return std::nullopt;
}

TodaProblem make_problem(ProblemKind kind, RDifferential q, GridPtr grid, SolverParams params) {
  if (!grid) throw ConfigError("problem needs a grid");
  switch (kind.kind) {
    case Kind::Cyclic:
      if (kind.rank < 2) throw ConfigError("cyclic rank must be at least 2");
      if (q.order() != kind.rank) throw ConfigError("order must equal rank for cyclic");
      break;
    case Kind::Subcyclic:
      if (kind.rank < 3) throw ConfigError("subcyclic rank must be at least 3");
      if (q.order() != kind.rank - 1)
        throw ConfigError("order must equal rank - 1 for subcyclic");
      break;
    case Kind::Vortex: {
      const auto& v = kind.vortex;
      if (!(v.b > 0.0)) throw ConfigError("vortex exponent b must be positive");
      if (!(v.a > 0.0)) throw ConfigError("vortex exponent a must be positive");
      if (!(v.kappa < 0.0)) throw ConfigError("vortex kappa must be negative");
      if (!(v.c > 0.0)) throw ConfigError("vortex constant c must be positive");
      kind.rank = q.order();
      break;
    }
    case Kind::Wang:
      kind.rank = 3;
      if (q.order() != 3) throw ConfigError("wang equation needs a cubic differential");
      break;
    case Kind::Maximal:
      kind.rank = 4;
      if (q.order() != 4) throw ConfigError("maximal surface reduction needs a quartic differential");
      break;
    case Kind::G2:
      kind.rank = 7;
      if (q.order() != 6) throw ConfigError("g2 system needs a sextic differential");
      break;
  }
  if (!(params.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (params.max_iterations < 1) throw ConfigError("max_iterations must be positive");
  if (params.continuation_steps < 1) throw ConfigError("continuation_steps must be positive");
  if (params.max_refinements < 0) throw ConfigError("max_refinements must be non-negative");
  return TodaProblem{kind, std::move(q), std::move(grid), params};
}

// ---------------------------------------------------------------------------

void LocalSystem::add_term(double scale, Weight w, std::vector<double> a) {
  terms_.push_back(Term{scale, w, std::move(a)});
}

LocalSystem::LocalSystem(const ProblemKind& kind) : kind_(kind) {
  const int r = kind.rank;
  auto unit = [&](int i) {
    std::vector<double> e(n_, 0.0);
    e[i] = 1.0;
    return e;
  };
  auto axpy = [](std::vector<double> x, double a, const std::vector<double>& y) {
    for (size_t i = 0; i < x.size(); ++i) x[i] += a * y[i];
    return x;
  };
  const bool sub = kind.kind == Kind::Subcyclic ||
                   (kind.kind == Kind::G2 && kind.g2_mode == G2Mode::Unconstrained);

  if (kind.kind == Kind::Cyclic || sub) {
    const int rr = kind.kind == Kind::G2 ? 7 : r;
    n_ = rr / 2;
    lap_scale_.assign(n_, 1.0);
    // subcyclic closes the chain with w_{n+1} = ext * w_n
    const double ext = -(2.0 * n_ + 1.0 - rr);
    // term 0 is f_0, term i is f_i
    if (!sub) {
      add_term(1.0, Weight::S, axpy(std::vector<double>(n_, 0.0), 2.0, unit(0)));
    } else {
      auto a = unit(0);
      a = n_ >= 2 ? axpy(a, 1.0, unit(1)) : axpy(a, ext, unit(0));
      add_term(1.0, Weight::S, a);
    }
    for (int i = 1; i <= n_; ++i) {
      std::vector<double> a(n_, 0.0);
      a[i - 1] = -1.0;
      if (i < n_) a[i] += 1.0;
      else if (sub) a[i - 1] += ext;
      else a[i - 1] = -(2.0 * n_ + 2.0 - rr);
      add_term(1.0, Weight::One, a);
    }
    mix_ = Eigen::MatrixXd::Zero(n_, n_ + 1);
    constant_.assign(n_, 0.0);
    for (int i = 1; i <= n_; ++i) {
      mix_(i - 1, i - 1) += 1.0;
      mix_(i - 1, i) -= 1.0;
      constant_[i - 1] = (rr + 1.0 - 2.0 * i) / 4.0;
    }
    if (sub && n_ >= 2) {
      // row 2 gains f_0
      mix_(1, 0) += 1.0;
    }
    // q = 0 root: f_i from the rows with f_0 = 0, then unwind the weights
    std::vector<double> f(n_ + 1, 0.0);
    for (int i = 1; i <= n_; ++i) {
      double prev = 0.0;
      for (int k = 1; k < i; ++k) prev += mix_(i - 1, k) * f[k];
      f[i] = (prev + constant_[i - 1]) / -mix_(i - 1, i);
    }
    fuchsian_.assign(n_, 0.0);
    const double last = sub ? 1.0 - ext : 2.0 * n_ + 2.0 - rr;
    fuchsian_[n_ - 1] = -std::log(f[n_]) / last;
    for (int i = n_ - 1; i >= 1; --i) fuchsian_[i - 1] = fuchsian_[i] - std::log(f[i]);
    return;
  }

  switch (kind.kind) {
    case Kind::Vortex: {
      const auto& v = kind.vortex;
      n_ = 1;
      lap_scale_ = {1.0};
      add_term(1.0, Weight::S, {v.a});
      add_term(1.0, Weight::One, {-v.b});
      mix_.resize(1, 2);
      mix_ << -v.kappa, v.kappa;
      constant_ = {v.c};
      fuchsian_ = {-std::log(v.c / -v.kappa) / v.b};
      break;
    }
    case Kind::Wang:
      n_ = 1;
      lap_scale_ = {4.0};
      add_term(2.0, Weight::One, {1.0});
      add_term(4.0, Weight::S, {-2.0});
      mix_.resize(1, 2);
      mix_ << 1.0, -1.0;
      constant_ = {-2.0};
      fuchsian_ = {0.0};
      break;
    case Kind::Maximal:
      // (u, v); |q|_{g_D} multiplies the quartic terms
      n_ = 2;
      lap_scale_ = {1.0, 1.0};
      add_term(1.0, Weight::SqrtS, {2.0, 1.0});
      add_term(1.0, Weight::One, {-2.0, 0.0});
      add_term(1.0, Weight::SqrtS, {2.0, -1.0});
      mix_.resize(2, 3);
      mix_ << 0.25, -1.0, 0.0, 0.5, 0.0, -0.5;
      constant_ = {0.25, 0.0};
      fuchsian_ = {std::log(2.0), 0.0};
      break;
    case Kind::G2:
      // w_3 = w_1 - w_2 - ln 2 substituted into the first two rows
      n_ = 2;
      lap_scale_ = {1.0, 1.0};
      add_term(1.0, Weight::S, {1.0, 1.0});
      add_term(1.0, Weight::One, {-1.0, 1.0});
      add_term(0.5, Weight::One, {1.0, -2.0});
      mix_.resize(2, 3);
      mix_ << 1.0, -1.0, 0.0, 1.0, 1.0, -1.0;
      constant_ = {1.5, 1.0};
      fuchsian_ = {-std::log(11.25), -std::log(7.5)};
      break;
    default: break;
  }
}

void LocalSystem::eval(const double* w, double s, double* rhs, double* jac) const {
  const int nt = static_cast<int>(terms_.size());
  double tv[8];
  for (int k = 0; k < nt; ++k) {
    const auto& t = terms_[k];
    double wt = 1.0;
    if (t.weight == Weight::S) wt = s;
    else if (t.weight == Weight::SqrtS) wt = std::sqrt(s);
    double e = 0.0;
    for (int j = 0; j < n_; ++j) e += t.a[j] * w[j];
    tv[k] = wt == 0.0 ? 0.0 : t.scale * wt * std::exp(e);
  }
  for (int i = 0; i < n_; ++i) {
    double acc = constant_[i];
    for (int k = 0; k < nt; ++k) acc += mix_(i, k) * tv[k];
    rhs[i] = acc;
    if (!jac) continue;
    for (int j = 0; j < n_; ++j) {
      double d = 0.0;
      for (int k = 0; k < nt; ++k) d += mix_(i, k) * tv[k] * terms_[k].a[j];
      jac[i * n_ + j] = d;
    }
  }
}

void LocalSystem::magnitude(const double* w, double s, double* mag) const {
  const int nt = static_cast<int>(terms_.size());
  double tv[8];
  for (int k = 0; k < nt; ++k) {
    const auto& t = terms_[k];
    double wt = 1.0;
    if (t.weight == Weight::S) wt = s;
    else if (t.weight == Weight::SqrtS) wt = std::sqrt(s);
    double e = 0.0, ae = 0.0;
    for (int j = 0; j < n_; ++j) {
      e += t.a[j] * w[j];
      ae += std::abs(t.a[j] * w[j]);
    }
    tv[k] = wt == 0.0 ? 0.0 : std::abs(t.scale * wt * std::exp(e)) * (1.0 + ae);
  }
  for (int i = 0; i < n_; ++i) {
    double acc = std::abs(constant_[i]);
    for (int k = 0; k < nt; ++k) acc += std::abs(mix_(i, k)) * tv[k];
    mag[i] = acc;
  }
}

bool LocalSystem::newton_local(double s, std::vector<double>& w) const {
  Eigen::VectorXd r(n_), step(n_);
  Eigen::MatrixXd J(n_, n_);
  auto norm_at = [&](const std::vector<double>& x) {
    eval(x.data(), s, r.data(), nullptr);
    return r.lpNorm<Eigen::Infinity>();
  };
  double res = norm_at(w);
  for (int it = 0; it < 100; ++it) {
    if (res <= 1e-14 * (1.0 + s)) return true;
    eval(w.data(), s, r.data(), J.data());
    // J filled row major; Eigen is column major
    Eigen::MatrixXd Jr = J.transpose();
    step = Jr.partialPivLu().solve(-r);
    if (!step.allFinite()) return false;
    double alpha = 1.0;
    std::vector<double> trial(n_);
    for (;;) {
      for (int j = 0; j < n_; ++j) trial[j] = w[j] + alpha * step[j];
      const double nr = norm_at(trial);
      if (std::isfinite(nr) && nr < (1.0 - 1e-4 * alpha) * res) {
        w = trial;
        res = nr;
        break;
      }
      alpha *= 0.5;
      if (alpha < 1e-6) return res <= 1e-11 * (1.0 + s);
    }
  }
  return res <= 1e-11 * (1.0 + s);
}

std::vector<double> LocalSystem::algebraic_root(double s) const {
  std::vector<double> w = fuchsian_;
  if (s == 0.0) return w;
  const double span = std::log1p(s);
  for (int m = 16; m <= 1 << 14; m *= 2) {
    w = fuchsian_;
    bool ok = true;
    for (int k = 1; k <= m && ok; ++k) ok = newton_local(std::expm1(span * k / m), w);
    if (ok) return w;
  }
  throw SolverError("boundary ansatz: algebraic system did not converge at s = " +
                    std::to_string(s));
}

std::vector<double> LocalSystem::expand(const std::vector<double>& w) const {
  if (kind_.kind == Kind::G2 && kind_.g2_mode == G2Mode::Constrained)
    return {w[0], w[1], w[0] - w[1] - std::log(2.0)};
  return w;
}

// ---------------------------------------------------------------------------

ResidualModel::ResidualModel(const TodaProblem& p, double amplitude)
    : sys_(p.kind), lap_(laplace_beltrami(p.grid)), N_(p.grid->size()) {
  const auto& g = *p.grid;
  const int n = sys_.size();
  s_ = Eigen::VectorXd::Zero(N_);
  if (!p.q.is_zero() && amplitude != 0.0) {
    const double t2 = amplitude * amplitude;
    for (int i = 0; i < N_; ++i) s_[i] = t2 * p.q.norm_sq(g.z(i));
  }
  bdry_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * N_);
  for (int i = 0; i < N_; ++i) {
    if (!g.is_boundary(i)) continue;
    const auto w = sys_.algebraic_root(s_[i]);
    for (int f = 0; f < n; ++f) bdry_[f * N_ + i] = w[f];
  }
}

Eigen::VectorXd ResidualModel::initial_guess() const {
  const int n = sys_.size();
  const auto fu = sys_.fuchsian();
  Eigen::VectorXd x(size());
  for (int f = 0; f < n; ++f)
    for (int i = 0; i < N_; ++i)
      x[f * N_ + i] = lap_.dirichlet(i) ? bdry_[f * N_ + i] : fu[f];
  return x;
}

Eigen::VectorXd ResidualModel::residual(const Eigen::VectorXd& x) const {
  const int n = sys_.size();
  Eigen::VectorXd R(size());
  double w[8], rhs[8];
  for (int i = 0; i < N_; ++i) {
    if (lap_.dirichlet(i)) {
      for (int f = 0; f < n; ++f) R[f * N_ + i] = x[f * N_ + i] - bdry_[f * N_ + i];
      continue;
    }
    for (int f = 0; f < n; ++f) w[f] = x[f * N_ + i];
    sys_.eval(w, s_[i], rhs, nullptr);
    for (int f = 0; f < n; ++f) {
      const double* xf = x.data() + static_cast<Eigen::Index>(f) * N_;
      double acc = 0.0;
      for (int e = lap_.row_begin(i); e < lap_.row_end(i); ++e)
        acc += lap_.weight(e) * (xf[lap_.col(e)] - xf[i]);
      R[f * N_ + i] = sys_.laplacian_scale(f) * acc - rhs[f];
    }
  }
  return R;
}

double ResidualModel::roundoff_floor(const Eigen::VectorXd& x) const {
  const int n = sys_.size();
  double w[8], mag[8];
  double worst = 0.0;
  for (int i = 0; i < N_; ++i) {
    if (lap_.dirichlet(i)) continue;
    for (int f = 0; f < n; ++f) w[f] = x[f * N_ + i];
    sys_.magnitude(w, s_[i], mag);
    for (int f = 0; f < n; ++f) {
      const double* xf = x.data() + static_cast<Eigen::Index>(f) * N_;
      double acc = 0.0;
      for (int e = lap_.row_begin(i); e < lap_.row_end(i); ++e)
        acc += std::abs(lap_.weight(e)) * (std::abs(xf[lap_.col(e)]) + std::abs(xf[i]));
      worst = std::max(worst, std::abs(sys_.laplacian_scale(f)) * acc + mag[f]);
    }
  }
  return kRoundoffFactor * std::numeric_limits<double>::epsilon() * worst;
}

Eigen::SparseMatrix<double> ResidualModel::jacobian(const Eigen::VectorXd& x) const {
  const int n = sys_.size();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(N_) * n * (6 + n));
  double w[8], rhs[8], jac[64];
  for (int i = 0; i < N_; ++i) {
    if (lap_.dirichlet(i)) {
      for (int f = 0; f < n; ++f) t.emplace_back(f * N_ + i, f * N_ + i, 1.0);
      continue;
    }
    for (int f = 0; f < n; ++f) w[f] = x[f * N_ + i];
    sys_.eval(w, s_[i], rhs, jac);
    for (int f = 0; f < n; ++f) {
      const double sc = sys_.laplacian_scale(f);
      double diag = 0.0;
      for (int e = lap_.row_begin(i); e < lap_.row_end(i); ++e) {
        t.emplace_back(f * N_ + i, f * N_ + lap_.col(e), sc * lap_.weight(e));
        diag -= sc * lap_.weight(e);
      }
      for (int g = 0; g < n; ++g) {
        double v = -jac[f * n + g];
        if (g == f) v += diag;
        t.emplace_back(f * N_ + i, g * N_ + i, v);
      }
    }
  }
  Eigen::SparseMatrix<double> J(size(), size());
  J.setFromTriplets(t.begin(), t.end());
  return J;
}

}  // namespace hmetric
