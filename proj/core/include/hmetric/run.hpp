#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "hmetric/config.hpp"
#include "hmetric/toda.hpp"

namespace hmetric {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitSolver = 2,
  kExitInconclusive = 3,
  kExitIo = 4,
};

struct RunOptions {
  std::string out;      // overrides config.output_dir when set
  int threads = 1;      // concurrent member solves in sweeps
  bool quiet = false;
  std::ostream* log = nullptr;  // progress lines; nullptr or quiet silences
};

/// Family-specific diagnostics of a converged solve (curvature cross-checks,
/// Bochner residual minima, Gauss identity, constraint gap...).
nlohmann::json derived_summary(const Solution& s);

/// Executes the configured mode and writes artifacts. Returns an ExitCode;
/// never throws for configuration, solver or I/O failures.
int run(const ExperimentConfig& config, const RunOptions& opts = {});

/// Regenerates reports for an artifact directory from its stored fields.
/// Returns kExitInconclusive when a regenerated report differs from the
/// stored one.
int verify_directory(const std::string& dir, const RunOptions& opts = {});

}  // namespace hmetric
