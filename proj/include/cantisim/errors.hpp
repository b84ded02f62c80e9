#pragma once

#include <stdexcept>
#include <string>

namespace cantisim {

// Invalid user-facing configuration (bad keys, violated invariants). CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown (NaN, degenerate geometry, eigen-solve failure). CLI exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Fixed-point iteration failed to reach tolerance; carries the last residual.
struct ConvergenceError : NumericalError {
  double residual;
  ConvergenceError(const std::string& msg, double res)
      : NumericalError(msg + " (residual " + std::to_string(res) + ")"), residual(res) {}
};

}  // namespace cantisim
