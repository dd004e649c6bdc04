#pragma once

#include <stdexcept>
#include <string>

namespace annulus {

/// Point outside the chart strip, or a map leaving its domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// An operation was called with inputs that violate its contract.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical integration left the chart interior. Carries the escaping point.
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& what, double theta, double s)
      : std::runtime_error(what), theta_(theta), s_(s) {}
  double theta() const noexcept { return theta_; }
  double s() const noexcept { return s_; }

private:
  double theta_;
  double s_;
};

/// Iterative refinement or a consistency check did not converge.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace annulus
