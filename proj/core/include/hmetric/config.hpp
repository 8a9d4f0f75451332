#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hmetric/grid.hpp"
#include "hmetric/toda.hpp"

namespace hmetric {

enum class RunMode { Solve, Verify, SweepR, SweepAmplitude, Refine };

const char* to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct GridSpec {
  double R = 0.95;
  int n_rho = 128;
  int n_theta = 64;
  RadialGrading grading = RadialGrading::Geodesic;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct SweepSpec {
  std::vector<double> radii{0.9, 0.95, 0.99};
  std::vector<double> amplitudes{0.25, 0.5, 1.0};
  int levels = 3;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// One experiment. The JSON form is documented in docs/config.md and
/// docs/config.schema.json.
struct ExperimentConfig {
  ProblemKind problem;
  RDifferential q;
  GridSpec grid;
  SolverParams solver;
  RunMode mode = RunMode::Solve;
  SweepSpec sweep;
  std::string output_dir = "out";

  /// Problem on the configured grid (or on radius R when given).
  TodaProblem make(double R = 0.0) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parse and validate. Throws ConfigError naming the offending key, or
/// carrying the precondition message of the module that rejects a value.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_file(const std::string& path);

/// Full form with every default written out; parse_config(render) == config.
nlohmann::json render_config(const ExperimentConfig& c);

}  // namespace hmetric
