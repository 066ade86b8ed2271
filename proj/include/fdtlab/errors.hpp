#pragma once

#include <stdexcept>
#include <string>

namespace fdtlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// generator construction
class NegativeRate : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class DuplicateEntry : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class SelfLoop : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// semigroup / time arguments
class NegativeTime : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class BadTimes : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// measures and invariance
class Reducible : public Error {
 public:
  using Error::Error;
};
class NotInvariant : public Error {
 public:
  using Error::Error;
};
class UnnormalizedInitial : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// perturbation families
class NegativeDirection : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class BalanceViolation : public Error {
 public:
  using Error::Error;
};
class UnboundedBelow : public Error {
 public:
  using Error::Error;
};
class DeltaTooLarge : public ValidationError {
 public:
  DeltaTooLarge(const std::string& msg, double requested, double cap)
      : ValidationError(msg), requested(requested), cap(cap) {}
  double requested;
  double cap;
};
class MalformedCycle : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class NegativeAlpha : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class Disconnected : public Error {
 public:
  using Error::Error;
};

// fdt-suite
class ModePreconditionFailed : public Error {
 public:
  using Error::Error;
};
class DirectionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class NotReversible : public Error {
 public:
  using Error::Error;
};

/// Raised when a family offered to b_symmetry_check is not mu^{delta f}-symmetric.
/// Carries the measured detailed-balance residual so callers can report how far
/// from symmetric the family is.
class NotSymmetricFamily : public Error {
 public:
  NotSymmetricFamily(const std::string& msg, double residual)
      : Error(msg), residual(residual) {}
  double residual;
};

// diffusion / monte carlo
class UnstableStep : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class RateNegative : public Error {
 public:
  using Error::Error;
};
class EmptyGrid : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace fdtlab
