#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hmetric/grid.hpp"
#include "hmetric/toda.hpp"

namespace hmetric {

/// f-fields of a Toda-type solution, f_0 .. f_r. Entries past n are filled
/// by f_i = f_{r-i}; for the cyclic chain f_r = f_0. Each f_i is the
/// conformal factor of g(h)_i relative to the background metric.
struct DerivedGeometry {
  ProblemKind kind;
  int r = 0;
  int n = 0;
  bool subcyclic = false;
  GridPtr grid;
  std::vector<ScalarField> f;

  const ScalarField& operator[](int i) const { return f.at(i); }
};

DerivedGeometry compute_f_fields(const Solution& s);

/// K of g(h)_i from the f-fields, 1 <= i <= n.
ScalarField curvature_closed_form(const DerivedGeometry& g, int i);

/// |closed form - discrete curvature of f_i lambda| at interior nodes
/// (boundary entries NaN).
ScalarField curvature_cross_check(const DerivedGeometry& g, int i);

/// Sectional curvature of the image plane. Throws ConfigError for cyclic
/// r < 3 and subcyclic r < 4.
ScalarField sectional_curvature(const DerivedGeometry& g);
bool sectional_applicable(const DerivedGeometry& g);

/// Energy density factor relative to the background metric.
ScalarField energy_density(const DerivedGeometry& g);

struct BochnerConstants {
  bool claimed = false;      // false: no inequality for this case
  bool conditional = false;  // needs the complete solution
  double c1 = 0.0, c2 = 0.0;
  std::string note;
};

/// Constants of Lap K >= c1 K (K + c2) for g(h)_i.
BochnerConstants bochner_constants(Kind kind, int r, int i);
/// The whole table for ranks 2..9 as JSON.
nlohmann::json bochner_table_json();

struct BochnerResult {
  BochnerConstants constants;
  double min_residual = 0.0;  // min over interior nodes
  int node = -1;
  ScalarField field;          // residual, NaN on the boundary
};

/// (1/f_i) Lap K - c1 K (K + c2) with the closed-form K.
BochnerResult bochner_residual(const DerivedGeometry& g, int i);

/// Vortex (2, 2, 1/4, -1), harmonic map to the hyperbolic plane: energies
/// H = e^{-2w} and L = |q|^2 e^{2w}, dilatation L/H and Jacobian H - L.
struct HarmonicMapFields {
  ScalarField H, L, dilatation, jacobian;
};
HarmonicMapFields harmonic_map_quantities(const Solution& s);

/// K of e^{-b w} g_D from the closed form -2 b kappa (e^{(a+b)w}|q|^2 - 1),
/// valid when b c = 1/2.
ScalarField vortex_curvature(const Solution& s);
/// |q|^2 e^{(a+b)w}
ScalarField vortex_ratio(const Solution& s);

/// Blaschke curvature -1 + 2 |q|^2 e^{-3w}.
ScalarField blaschke_curvature(const Solution& s);

struct MaximalGeometry {
  ScalarField metric_factor;  // induced metric / lambda = 4 e^{-2u}
  ScalarField k;              // -1 + |beta|^2_h
  ScalarField k_discrete;     // curvature of the induced metric, interior only
  double gauss_discrepancy = 0.0;
  ScalarField bochner;        // Lap_g k - k (1 + k), interior only
  double bochner_min = 0.0;
};
MaximalGeometry maximal_geometry(const Solution& s);

struct G2Geometry {
  ScalarField metric_factor;  // induced metric / lambda = 2 f_3
  ScalarField k;              // f_2 / f_3 - 1
  ScalarField k_discrete;
  ScalarField bochner;        // Lap_g k - 3 k (k + 1)
  double k_min = 0.0;
  double bochner_min = 0.0;
  double gauss_discrepancy = 0.0;
  double constraint_gap = 0.0;       // sup |w1 - w2 - w3 - ln 2|
  double consistency_residual = 0.0; // third row of the subcyclic system
};
G2Geometry g2_geometry(const Solution& s);

/// Tolerance for one-sided inequalities, eps_h = C h^2. C is the scaled
/// discretisation error of the background curvature on the same grid.
struct Tolerance {
  double C = 0.0;
  double h = 0.0;
  double eps = 0.0;
  double background_error = 0.0;
};
Tolerance calibrate_tolerance(const GridPtr& g);
inline constexpr double kToleranceSafety = 8.0;

}  // namespace hmetric
