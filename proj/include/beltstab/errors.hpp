#pragma once

#include <stdexcept>
#include <string>

namespace beltstab {

/// Argument outside the mathematical domain of an operation (rho <= 0, xi <= -1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configuration in which two bodies overlap: |x_i - x_j| < a_i + a_j.
class HardCoreViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration requested above the supported vertex count.
class EnumerationCapError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monte Carlo run unusable: stuck chain, non-converged statistics, starved rejection sampler.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario file could not be parsed or failed validation. `where` is a JSON
/// pointer to the offending field, or "line N" for syntax errors.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace beltstab
