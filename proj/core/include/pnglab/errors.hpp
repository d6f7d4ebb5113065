#pragma once

#include <stdexcept>
#include <string>

namespace pnglab {

/// Argument outside the mathematical domain of an operation (non-finite input,
/// Lambda <= 1 in the Gaussian regime, divergent kernel parameters, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration of a numerical method or an experiment: contour
/// geometry that crosses a pole, non-increasing time grids, bad quadrature
/// orders, missing experiment keys.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A convergence certificate failed: two discretization orders disagree by
/// more than the advertised tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double discrepancy, double tolerance)
      : std::runtime_error(what), discrepancy_(discrepancy), tolerance_(tolerance) {}

  double discrepancy() const noexcept { return discrepancy_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  double discrepancy_;
  double tolerance_;
};

/// Iterative numerical kernel failed to converge (eigen-solver iteration cap).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal invariant broken during a simulation (layer ordering).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pnglab
