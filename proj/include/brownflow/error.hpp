#pragma once

#include <stdexcept>
#include <string>

namespace brownflow {

/// Invalid matrix dimension or sampler configuration.
class InvalidDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a formula (x <= 0, lambda = 0, point
/// outside Sigma_t, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation time at or past the lifetime of a characteristic.
class LifetimeExceeded : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative numerical method (eigensolver, root finder, quadrature)
/// failed to reach its tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace brownflow
