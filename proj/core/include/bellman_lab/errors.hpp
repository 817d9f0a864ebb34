#pragma once

#include <stdexcept>
#include <string>

namespace bellman_lab {

/// A precondition on the mathematical domain was violated (f > F, p <= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A requested object would exceed a configured resource budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver failed to converge or a construction is infeasible.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A proven inequality failed on concrete data. Should never be raised.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The feasible-point sampler ran out of retries for one trial.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bellman_lab
