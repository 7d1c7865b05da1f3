#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tcsplit {

/// Bad user configuration (exit code 1 at the CLI).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// API misuse: mismatched orderings, lengths, or preconditions.
class UsageError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Numerical failure: singular pivots, eigensolver non-convergence, blow-up.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A NumericalError raised while stepping, tagged with the failing step.
class StepError : public NumericalError {
public:
  StepError(std::size_t step, const std::string& what)
      : NumericalError("step " + std::to_string(step) + ": " + what +
                       " (try a smaller dt)"),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

}  // namespace tcsplit
