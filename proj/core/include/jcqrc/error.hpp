#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace jcqrc {

// Invalid user-facing configuration (bad parameter, unknown key, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The master-equation integrator produced a non-finite state.
class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure outside propagation (singular solve, undefined metric).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics accumulated while running an experiment.
using Warnings = std::vector<std::string>;

}  // namespace jcqrc
