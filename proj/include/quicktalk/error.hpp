#pragma once

#include <stdexcept>
#include <string>

namespace quicktalk {

/// A value outside its documented bit width or range.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A 14-bit filter code that violates the wildcard prefix discipline.
class MalformedFilter : public InputError {
 public:
  using InputError::InputError;
};

/// Scenario, registry or topology misconfiguration. Carries the offending
/// line when it came from a file (0 otherwise).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// An internal invariant was violated while a simulation was running.
class SimulationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace quicktalk
