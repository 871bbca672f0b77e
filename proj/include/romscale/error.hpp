#pragma once

#include <stdexcept>
#include <string>

namespace romscale {

// Base of every error thrown by the library. The CLI maps
// NumericalError and its subclasses to exit code 2, everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs are well formed but incompatible (grid/component/length mismatch).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed file content, bad metadata, non-monotone times, ...
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Non-finite values appeared while integrating a model.
class InstabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A calibration bracket does not contain a sign change.
class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace romscale
