#pragma once

#include <stdexcept>
#include <string>

namespace uecert {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operand outside the mathematical domain of an operation
// (division by an interval containing zero, sqrt of a negative interval, ...).
struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A construction whose feasibility conditions fail (e.g. transition window
// shorter than the minimum feasible length).  Carries the minimum length so
// callers can report how to fix the inputs.
struct InfeasibleError : Error {
  double min_feasible = 0.0;
  explicit InfeasibleError(const std::string& msg, double min_len = 0.0)
      : Error(msg), min_feasible(min_len) {}
};

// Metric-specific failures: non-positive-definite matrix, degenerate chart
// point, dimension mismatch.
struct MetricError : Error {
  explicit MetricError(const std::string& msg) : Error(msg) {}
};

// Configuration / CLI input problems.
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace uecert
