#pragma once

#include <stdexcept>
#include <string>

namespace avgq {

/// A structurally invalid stochastic model (non-stochastic rows, reducible or
/// periodic chain, rewards out of range). Maps to CLI exit code 3.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative procedure failed to reach its tolerance, or diverged.
/// Maps to CLI exit code 4.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual, long iterations)
      : std::runtime_error(what), last_residual(last_residual), iterations(iterations) {}

  double last_residual = 0.0;
  long iterations = 0;
};

/// The online almost-sure growth envelope was violated. Carries the step,
/// the iterate's span, and the bound it exceeded. Maps to CLI exit code 4.
class BoundViolationError : public std::runtime_error {
 public:
  BoundViolationError(const std::string& what, long step, double span_value, double bound)
      : std::runtime_error(what), step(step), span_value(span_value), bound(bound) {}

  long step = 0;
  double span_value = 0.0;
  double bound = 0.0;
};

}  // namespace avgq
