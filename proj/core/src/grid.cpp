#include "hmetric/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hmetric/errors.hpp"

namespace hmetric {

const char* to_string(RadialGrading g) {
  return g == RadialGrading::Uniform ? "uniform" : "geodesic";
}

RadialGrading grading_from_string(const std::string& s) {
  if (s == "uniform") return RadialGrading::Uniform;
  if (s == "geodesic") return RadialGrading::Geodesic;
  throw ConfigError("unknown radial grading: " + s);
}

DiskGrid::DiskGrid(double R, int n_rho, int n_theta, RadialGrading grading)
    : R_(R), n_rho_(n_rho), n_theta_(n_theta), grading_(grading) {
  const double xi_max = grading == RadialGrading::Uniform ? R : std::atanh(R);
  h_ = xi_max / (n_rho - 1);
  dtheta_ = 2.0 * M_PI / n_theta;
  rho_.resize(n_rho);
  lambda_.resize(n_rho);
  for (int j = 0; j < n_rho; ++j) {
    const double x = j * h_;
    rho_[j] = grading == RadialGrading::Uniform ? x : std::tanh(x);
  }
  rho_[n_rho - 1] = R;
  for (int j = 0; j < n_rho; ++j) lambda_[j] = hyperbolic_density(cplx(rho_[j], 0.0));
}

cplx DiskGrid::z(int node) const {
  const double r = rho_[ring(node)];
  const double t = theta(slot(node));
  return cplx(r * std::cos(t), r * std::sin(t));
}

double DiskGrid::dphi(int j) const {
  if (grading_ == RadialGrading::Uniform) return 1.0;
  const double r = rho_[j];
  return 1.0 - r * r;
}

double DiskGrid::d2phi(int j) const {
  if (grading_ == RadialGrading::Uniform) return 0.0;
  const double r = rho_[j];
  return -2.0 * r * (1.0 - r * r);
}

int DiskGrid::ring_at_most(double r) const {
  auto it = std::upper_bound(rho_.begin(), rho_.end(), r * (1.0 + 1e-14));
  return std::max(0, static_cast<int>(it - rho_.begin()) - 1);
}

GridPtr build_grid(double R, int n_rho, int n_theta, RadialGrading grading) {
  if (!(R > 0.0 && R < 1.0)) throw DomainError("grid radius must lie in (0, 1)");
  if (n_rho < 16) throw ConfigError("n_rho must be at least 16");
  if (!(n_theta == 1 || n_theta >= 8)) throw ConfigError("n_theta must be 1 or at least 8");
  return std::make_shared<const DiskGrid>(R, n_rho, n_theta, grading);
}

ScalarField::ScalarField(GridPtr g, double fill)
    : grid(std::move(g)), values(Eigen::VectorXd::Constant(grid->size(), fill)) {}

ScalarField::ScalarField(GridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) throw ConfigError("field size does not match grid");
}

bool in_region(const DiskGrid& g, int node, Region region) {
  return region == Region::All || !g.is_boundary(node);
}

namespace {

template <class Op>
double reduce(const ScalarField& f, Region region, double init, double r_max, Op op) {
  double acc = init;
  const auto& g = *f.grid;
  const int last = g.ring_at_most(r_max);
  for (int i = 0; i < f.size(); ++i) {
    if (!in_region(g, i, region) || g.ring(i) > last) continue;
    acc = op(acc, f[i]);
  }
  return acc;
}

}  // namespace

double sup_abs(const ScalarField& f, Region region) {
  return reduce(f, region, 0.0, 2.0, [](double a, double v) { return std::max(a, std::abs(v)); });
}

double max_value(const ScalarField& f, Region region) {
  return reduce(f, region, -std::numeric_limits<double>::infinity(), 2.0,
                [](double a, double v) { return std::max(a, v); });
}

double min_value(const ScalarField& f, Region region) {
  return reduce(f, region, std::numeric_limits<double>::infinity(), 2.0,
                [](double a, double v) { return std::min(a, v); });
}

double sup_abs_within(const ScalarField& f, double r, Region region) {
  return reduce(f, region, 0.0, r, [](double a, double v) { return std::max(a, std::abs(v)); });
}

ScalarField density_field(const GridPtr& g) {
  ScalarField out(g);
  for (int i = 0; i < g->size(); ++i) out[i] = g->density(i);
  return out;
}

ScalarField q_norm_sq_field(const GridPtr& g, const RDifferential& q) {
  ScalarField out(g);
  if (q.is_zero()) return out;
  for (int i = 0; i < g->size(); ++i) out[i] = q.norm_sq(g->z(i));
  return out;
}

QSup sup_q_norm(const RDifferential& q, const GridPtr& g) {
  QSup best;
  for (int i = 0; i < g->size(); ++i) {
    const double v = q.norm_sq(g->z(i));
    if (v > best.value) best = {v, i, g->rho(g->ring(i))};
  }
  return best;
}

namespace {
/// Rings with rho below this use fourth-order angular differences.
constexpr double kFourthOrderRadius = 0.5;
}  // namespace

LinearOperator::LinearOperator(GridPtr g) : grid_(std::move(g)) {
  const auto& G = *grid_;
  const int nt = G.n_theta();
  const double h = G.h();
  offsets_.assign(G.size() + 1, 0);
  for (int node = 0; node < G.size(); ++node) {
    offsets_[node] = static_cast<int>(cols_.size());
    if (G.is_boundary(node)) continue;
    const int j = G.ring(node), k = G.slot(node);
    if (j == 0) {
      // flat Laplacian at the origin from the mean over ring 1
      const double r1 = G.rho(1);
      const double w = 4.0 / (r1 * r1 * nt) / (4.0 * G.density(node));
      for (int kk = 0; kk < nt; ++kk) {
        cols_.push_back(G.index(1, kk));
        weights_.push_back(w);
      }
      continue;
    }
    const double r = G.rho(j);
    const double a = 1.0 / (4.0 * G.density(node));
    const double p1 = G.dphi(j), p2 = G.d2phi(j);
    const double A = 1.0 / (p1 * p1);
    const double B = -p2 / (p1 * p1 * p1) + 1.0 / (r * p1);
    cols_.push_back(G.index(j + 1, k));
    weights_.push_back(a * (A / (h * h) + B / (2.0 * h)));
    cols_.push_back(G.index(j - 1, k));
    weights_.push_back(a * (A / (h * h) - B / (2.0 * h)));
    if (nt > 1) {
      const double d2 = G.dtheta() * G.dtheta();
      if (r < kFourthOrderRadius) {
        // the three-point difference leaves an error ~ dtheta^2 |grad f| / rho
        // that does not vanish on ring 1; far from the origin it is kept
        // because it is monotone (no overshoot at boundary-pole peaks)
        const double wt = a / (12.0 * r * r * d2);
        cols_.push_back(G.index(j, (k + 1) % nt));
        weights_.push_back(16.0 * wt);
        cols_.push_back(G.index(j, (k + nt - 1) % nt));
        weights_.push_back(16.0 * wt);
        cols_.push_back(G.index(j, (k + 2) % nt));
        weights_.push_back(-wt);
        cols_.push_back(G.index(j, (k + nt - 2) % nt));
        weights_.push_back(-wt);
      } else {
        const double wt = a / (r * r * d2);
        cols_.push_back(G.index(j, (k + 1) % nt));
        weights_.push_back(wt);
        cols_.push_back(G.index(j, (k + nt - 1) % nt));
        weights_.push_back(wt);
      }
    }
  }
  offsets_[G.size()] = static_cast<int>(cols_.size());
}

Eigen::VectorXd LinearOperator::apply(const Eigen::VectorXd& f) const {
  Eigen::VectorXd out(f.size());
  for (int i = 0; i < f.size(); ++i) {
    if (dirichlet(i)) {
      out[i] = f[i];
      continue;
    }
    double acc = 0.0;
    for (int e = offsets_[i]; e < offsets_[i + 1]; ++e) acc += weights_[e] * (f[cols_[e]] - f[i]);
    out[i] = acc;
  }
  return out;
}

ScalarField LinearOperator::apply(const ScalarField& f) const {
  return ScalarField(grid_, apply(f.values));
}

Eigen::SparseMatrix<double> LinearOperator::matrix() const {
  const int n = grid_->size();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(cols_.size() + n);
  for (int i = 0; i < n; ++i) {
    if (dirichlet(i)) {
      t.emplace_back(i, i, 1.0);
      continue;
    }
    double diag = 0.0;
    for (int e = offsets_[i]; e < offsets_[i + 1]; ++e) {
      t.emplace_back(i, cols_[e], weights_[e]);
      diag -= weights_[e];
    }
    t.emplace_back(i, i, diag);
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

LinearOperator laplace_beltrami(const GridPtr& g) { return LinearOperator(g); }

ScalarField discrete_curvature(const ScalarField& factor, FactorConvention conv) {
  const auto& g = factor.grid;
  Eigen::VectorXd logf(factor.size());
  for (int i = 0; i < factor.size(); ++i) {
    if (!(factor[i] > 0.0)) throw DomainError("conformal factor must be positive");
    logf[i] = std::log(factor[i]);
  }
  const Eigen::VectorXd lap = laplace_beltrami(g).apply(logf);
  ScalarField out(g);
  for (int i = 0; i < factor.size(); ++i) {
    if (g->is_boundary(i)) {
      out[i] = std::numeric_limits<double>::quiet_NaN();
    } else if (conv == FactorConvention::Background) {
      out[i] = (-1.0 - 2.0 * lap[i]) / factor[i];
    } else {
      out[i] = -2.0 * g->density(i) * lap[i] / factor[i];
    }
  }
  return out;
}

bool radial_reduce(const RDifferential& q) { return q.as_monomial().has_value(); }

double radial_interpolate(const ScalarField& profile, double rho) {
  const auto& g = *profile.grid;
  if (!g.radial()) throw ConfigError("radial_interpolate needs a radial grid");
  if (rho < 0.0 || rho > g.radius() * (1.0 + 1e-14))
    throw DomainError("radius outside the radial grid");
  int j = g.ring_at_most(rho);
  if (j >= g.n_rho() - 1) return profile[g.n_rho() - 1];
  const double r0 = g.rho(j), r1 = g.rho(j + 1);
  const double t = (rho - r0) / (r1 - r0);
  if (t <= 1e-13) return profile[j];
  return (1.0 - t) * profile[j] + t * profile[j + 1];
}

std::string field_to_csv(const ScalarField& f) {
  const auto& g = *f.grid;
  std::string out = "rho,theta,x,y,value\n";
  char buf[160];
  for (int i = 0; i < f.size(); ++i) {
    const cplx z = g.z(i);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", g.rho(g.ring(i)),
                  g.theta(g.slot(i)), z.real(), z.imag(), f[i]);
    out += buf;
  }
  return out;
}

ScalarField field_from_csv(const std::string& text, const GridPtr& g) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("rho,theta,x,y,value", 0) != 0)
    throw IoError("field csv: missing header");
  ScalarField out(g);
  int i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= g->size()) throw IoError("field csv: more rows than grid nodes");
    double v[5];
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3], &v[4]) != 5)
      throw IoError("field csv: malformed row " + std::to_string(i + 2));
    if (std::abs(v[0] - g->rho(g->ring(i))) > 1e-12 ||
        std::abs(v[1] - g->theta(g->slot(i))) > 1e-12)
      throw IoError("field csv: node coordinates do not match the grid");
    out[i++] = v[4];
  }
  if (i != g->size()) throw IoError("field csv: fewer rows than grid nodes");
  return out;
}

}  // namespace hmetric
