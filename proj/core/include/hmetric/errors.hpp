#pragma once

#include <stdexcept>
#include <string>

namespace hmetric {

/// A point or parameter left the open unit disk, or a pole sits inside it.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Bad user input: ranks, orders, grid sizes, schema violations.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Newton or continuation gave up. The message carries the last residual.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File system failures in the report layer.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hmetric
