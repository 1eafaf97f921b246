#pragma once

#include <stdexcept>
#include <string>

namespace hsw {

// Invalid user configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure inside a solver (CLI exit code 3).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Regression or acceptance failure (CLI exit code 4).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsw
