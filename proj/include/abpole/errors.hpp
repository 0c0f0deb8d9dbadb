#pragma once

#include <stdexcept>
#include <string>

namespace abpole {

// Contract violations (bad arguments, geometry, config).
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Evaluation at a singular point of the potential / angle functions.
struct SingularPoint : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

// Linear or eigen solver did not meet its residual contract.
struct SolverFailure : std::runtime_error {
  SolverFailure(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual(best_residual) {}
  double best_residual;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace abpole
