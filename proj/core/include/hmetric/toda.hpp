#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hmetric/geometry.hpp"
#include "hmetric/grid.hpp"

namespace hmetric {

/// Equation families. All are written in the K = -1 gauge of the disk.
///   Cyclic     Toda system for q of order r, unknowns w_1..w_n, n = r/2
///   Subcyclic  variant Toda system for q of order r-1
///   Vortex     Lap w = -kappa (|q|^2 e^{a w} - e^{-b w}) + c
///   Wang       affine sphere equation, cubic q
///   Maximal    rank-1 maximal surface pair (u, v), quartic q
///   G2         subcyclic r = 7 with q of order 6; constrained mode imposes
///              the G2 relation h1 = 2 h2 h3 and keeps (w_1, w_2)
enum class Kind { Cyclic, Subcyclic, Vortex, Wang, Maximal, G2 };
enum class G2Mode { Constrained, Unconstrained };

const char* to_string(Kind k);
Kind kind_from_string(const std::string& s);
const char* to_string(G2Mode m);
G2Mode g2_mode_from_string(const std::string& s);

struct VortexParams {
  double a = 2.0, b = 2.0, c = 0.25, kappa = -1.0;
  friend bool operator==(const VortexParams&, const VortexParams&) = default;
};

struct ProblemKind {
  Kind kind = Kind::Cyclic;
  int rank = 2;  // r for Cyclic/Subcyclic; fixed for Wang (3), Maximal (4), G2 (7)
  VortexParams vortex;
  G2Mode g2_mode = G2Mode::Constrained;

  /// Number of unknown fields solved for.
  int unknowns() const;
  /// Number of Toda weights reported (G2 constrained reports w_3 too).
  int weights() const;
  /// Order the differential must have.
  std::optional<int> required_order() const;
  /// Subcyclic form used for the derived f-fields (G2 maps to Subcyclic 7).
  bool toda_like() const { return kind == Kind::Cyclic || kind == Kind::Subcyclic || kind == Kind::G2; }
  bool subcyclic_like() const { return kind == Kind::Subcyclic || kind == Kind::G2; }

  friend bool operator==(const ProblemKind&, const ProblemKind&) = default;
};

struct SolverParams {
  double tolerance = 1e-10;
  int max_iterations = 50;
  int continuation_steps = 8;
  int max_refinements = 5;  // each halves the continuation step
  friend bool operator==(const SolverParams&, const SolverParams&) = default;
};

struct TodaProblem {
  ProblemKind kind;
  RDifferential q;
  GridPtr grid;
  SolverParams params;
};

/// Validating constructor. Throws ConfigError with the messages the CLI shows.
TodaProblem make_problem(ProblemKind kind, RDifferential q, GridPtr grid,
                         SolverParams params = {});

/// Pointwise nonlinearity of a family. Every right-hand side is a sum of
/// terms scale * weight(s) * exp(a . w) plus a constant, where s is
/// |q|^2 in the background metric.
class LocalSystem {
 public:
  explicit LocalSystem(const ProblemKind& kind);

  int size() const { return n_; }
  /// Factor in front of the Laplacian in row i.
  double laplacian_scale(int i) const { return lap_scale_[i]; }

  /// rhs (n) and d rhs_i / d w_j (n x n, row major) at one node.
  void eval(const double* w, double s, double* rhs, double* jac) const;

  /// Sum of the magnitudes that make up rhs_i, exponent rounding included.
  void magnitude(const double* w, double s, double* mag) const;

  /// Constant solution for q = 0.
  std::vector<double> fuchsian() const { return fuchsian_; }

  /// Zero of the algebraic system at fixed s, followed from the q = 0 root.
  std::vector<double> algebraic_root(double s) const;

  /// Unknowns -> reported Toda weights.
  std::vector<double> expand(const std::vector<double>& w) const;

 private:
  enum class Weight { One, S, SqrtS };
  struct Term {
    double scale;
    Weight weight;
    std::vector<double> a;
  };
  ProblemKind kind_;
  int n_ = 1;
  std::vector<double> lap_scale_;
  std::vector<Term> terms_;
  Eigen::MatrixXd mix_;  // rhs_i = sum_k mix(i,k) term_k + constant_i
  std::vector<double> constant_;
  std::vector<double> fuchsian_;

  void add_term(double scale, Weight w, std::vector<double> a);
  bool newton_local(double s, std::vector<double>& w) const;
};

/// Stacked discrete residual for a problem at amplitude t (q -> t q).
/// Unknown vector is field-major: x[i * N + node].
class ResidualModel {
 public:
  ResidualModel(const TodaProblem& p, double amplitude = 1.0);

  int unknowns() const { return sys_.size(); }
  int nodes() const { return N_; }
  int size() const { return sys_.size() * N_; }
  const LocalSystem& system() const { return sys_; }
  const LinearOperator& laplacian() const { return lap_; }
  const Eigen::VectorXd& boundary_values() const { return bdry_; }
  const Eigen::VectorXd& s_values() const { return s_; }

  /// Fuchsian constants inside, ansatz on the boundary ring.
  Eigen::VectorXd initial_guess() const;
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const;
  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& x) const;
  /// Sup-norm residual that rounding alone can produce at x.
  double roundoff_floor(const Eigen::VectorXd& x) const;

 private:
  LocalSystem sys_;
  LinearOperator lap_;
  int N_;
  Eigen::VectorXd s_, bdry_;
};

struct ContinuationStep {
  double amplitude;
  int iterations;
  double residual;
  bool accepted;
};

struct Solution {
  ProblemKind kind;
  RDifferential q;
  GridPtr grid;
  SolverParams params;
  std::vector<ScalarField> unknowns;  // solved fields
  std::vector<ScalarField> weights;   // reported w_1..w_n (or u, v / w)
  double residual = 0.0;
  /// Residual attainable in double precision; convergence uses max(tolerance, floor).
  double roundoff_floor = 0.0;
  int newton_iterations = 0;
  std::vector<ContinuationStep> trace;
};

/// residual <= max(tolerance, roundoff_floor)
bool converged(const Solution& s);

/// Damped Newton with amplitude continuation. Throws SolverError.
Solution solve(const TodaProblem& p);

/// Rebuild a Solution from stored unknown fields (no solve).
Solution assemble_solution(const TodaProblem& p, std::vector<ScalarField> unknowns);

/// Ring 0 .. n_rho-1 profile of a radially symmetric problem on a radial grid
/// sharing R and grading, with n_rho_fine - 1 = factor * (n_rho - 1).
Solution solve_radial(const TodaProblem& p, int factor);

}  // namespace hmetric
