#pragma once

#include <stdexcept>
#include <string>

namespace accsplit {

/// Non-finite data or mismatched dimensions handed to an oracle.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scalar parameter (mu, alpha, t, ...) outside the range where the
/// operation is defined.
class ParameterDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested oracle is not available for this function kind, e.g. the
/// prox of a logistic loss without the inner Newton solver.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A Lyapunov value needs the optimal value / minimizer but none was given.
class NeedsReference : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A rate fit was requested over a window where the series sits at the
/// floating-point floor.
class WindowTooLate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency check between two algebraically equal formulas
/// failed.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace accsplit
