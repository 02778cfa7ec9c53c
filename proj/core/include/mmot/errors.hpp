#pragma once

#include <stdexcept>
#include <string>

namespace mmot {

// Invalid measures, mismatched grids, violated preconditions.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration, input files, or CLI arguments.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem size exceeds the configured variable budget.
class BudgetError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The LP kernel could not certify its result within tolerances.
class NumericalBreakdown : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace mmot
