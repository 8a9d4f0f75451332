#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hmetric/geometry.hpp"

namespace hmetric {

/// How the radial nodes are spaced. The grid is uniform in a computational
/// coordinate xi and rho = Phi(xi).
///   Uniform:   rho = xi
///   Geodesic:  rho = tanh(xi), i.e. uniform in hyperbolic distance / 2
enum class RadialGrading { Uniform, Geodesic };

const char* to_string(RadialGrading g);
RadialGrading grading_from_string(const std::string& s);

/// Polar tensor grid on |z| <= R.
///
/// Node (j, k) sits at rho_j, theta_k with j = 0 .. n_rho-1 and
/// k = 0 .. n_theta-1; index = j * n_theta + k. Ring 0 is the origin, stored
/// n_theta times so that every ring has the same layout. The last ring is the
/// Dirichlet boundary. n_theta == 1 gives the 1D radial grid.
class DiskGrid {
 public:
  DiskGrid(double R, int n_rho, int n_theta,
           RadialGrading grading = RadialGrading::Geodesic);

  double radius() const { return R_; }
  int n_rho() const { return n_rho_; }
  int n_theta() const { return n_theta_; }
  RadialGrading grading() const { return grading_; }
  bool radial() const { return n_theta_ == 1; }
  int size() const { return n_rho_ * n_theta_; }

  /// Spacing of the computational radial coordinate.
  double h() const { return h_; }
  double dtheta() const { return dtheta_; }

  int index(int j, int k) const { return j * n_theta_ + k; }
  int ring(int node) const { return node / n_theta_; }
  int slot(int node) const { return node % n_theta_; }

  double xi(int j) const { return j * h_; }
  double rho(int j) const { return rho_[j]; }
  double theta(int k) const { return k * dtheta_; }
  cplx z(int node) const;
  /// lambda at the node
  double density(int node) const { return lambda_[ring(node)]; }

  bool is_boundary(int node) const { return ring(node) == n_rho_ - 1; }
  bool is_center(int node) const { return ring(node) == 0; }

  /// d rho / d xi and d^2 rho / d xi^2 at ring j.
  double dphi(int j) const;
  double d2phi(int j) const;

  /// Ring index of the largest radius not exceeding r (r >= 0).
  int ring_at_most(double r) const;

  friend bool operator==(const DiskGrid& a, const DiskGrid& b) {
    return a.R_ == b.R_ && a.n_rho_ == b.n_rho_ && a.n_theta_ == b.n_theta_ &&
           a.grading_ == b.grading_;
  }

 private:
  double R_;
  int n_rho_, n_theta_;
  RadialGrading grading_;
  double h_, dtheta_;
  std::vector<double> rho_, lambda_;
};

using GridPtr = std::shared_ptr<const DiskGrid>;

/// Validating factory. R in (0,1), n_rho >= 16, n_theta == 1 or >= 8.
GridPtr build_grid(double R, int n_rho, int n_theta,
                   RadialGrading grading = RadialGrading::Geodesic);

/// Real samples on a grid.
struct ScalarField {
  GridPtr grid;
  Eigen::VectorXd values;

  ScalarField() = default;
  ScalarField(GridPtr g, double fill = 0.0);
  ScalarField(GridPtr g, Eigen::VectorXd v);

  double operator[](int i) const { return values[i]; }
  double& operator[](int i) { return values[i]; }
  int size() const { return static_cast<int>(values.size()); }
};

enum class Region { All, Interior };

bool in_region(const DiskGrid& g, int node, Region region);
double sup_abs(const ScalarField& f, Region region = Region::All);
double max_value(const ScalarField& f, Region region = Region::All);
double min_value(const ScalarField& f, Region region = Region::All);
/// Same reductions restricted to |z| <= r.
double sup_abs_within(const ScalarField& f, double r, Region region = Region::All);

/// Sampled version of an analytic function of z.
template <class F>
ScalarField sample(const GridPtr& g, F&& fn) {
  ScalarField out(g);
  for (int i = 0; i < g->size(); ++i) out[i] = fn(g->z(i));
  return out;
}

ScalarField density_field(const GridPtr& g);
ScalarField q_norm_sq_field(const GridPtr& g, const RDifferential& q);

struct QSup {
  double value = 0.0;
  int node = 0;
  double rho = 0.0;
};
/// sup of |q|_{g_D}^2 over the grid nodes.
QSup sup_q_norm(const RDifferential& q, const GridPtr& g);

/// Laplace-Beltrami operator of the background metric: second-order radial
/// differences, fourth-order angular differences for rho < 1/2 and the monotone
/// three-point angular difference outside, written as weighted differences so
/// that constants are annihilated exactly.
/// Boundary rows are identity rows.
class LinearOperator {
 public:
  explicit LinearOperator(GridPtr g);

  const GridPtr& grid() const { return grid_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
  ScalarField apply(const ScalarField& f) const;

  /// Row pattern for assembly: neighbours and weights of an interior row.
  int row_begin(int node) const { return offsets_[node]; }
  int row_end(int node) const { return offsets_[node + 1]; }
  int col(int e) const { return cols_[e]; }
  double weight(int e) const { return weights_[e]; }
  bool dirichlet(int node) const { return grid_->is_boundary(node); }

  /// Assembled matrix, diagonal = -(sum of weights).
  Eigen::SparseMatrix<double> matrix() const;

 private:
  GridPtr grid_;
  std::vector<int> offsets_, cols_;
  std::vector<double> weights_;
};

LinearOperator laplace_beltrami(const GridPtr& g);

/// How the conformal factor passed to discrete_curvature is read.
///   Absolute:   the metric is factor * |dz|^2, all of it discretised
///   Background: the metric is factor * lambda |dz|^2; the background
///               curvature -1 enters exactly
enum class FactorConvention { Absolute, Background };

/// Gaussian curvature of a conformal metric from the discrete operator.
/// Defined at interior nodes; boundary entries are NaN.
ScalarField discrete_curvature(const ScalarField& factor,
                               FactorConvention conv = FactorConvention::Background);

/// True when the problem for q can be reduced to the 1D radial grid.
bool radial_reduce(const RDifferential& q);

/// Linear interpolation of a radial profile (n_theta == 1 field) at rho.
double radial_interpolate(const ScalarField& profile, double rho);

/// CSV with columns rho,theta,x,y,value, 17 significant digits.
std::string field_to_csv(const ScalarField& f);
ScalarField field_from_csv(const std::string& text, const GridPtr& g);

}  // namespace hmetric
