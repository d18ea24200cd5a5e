#pragma once

#include <stdexcept>
#include <string>

namespace umorse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, invalid space parameters, p == q where
/// a direction is required, schema violations in scenario files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation could not be carried out on valid inputs.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A doubled-rectangle segment or trajectory passes through a cone point.
class DegenerateGeodesicError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An operation was called outside its precondition (e.g. a Hessian at a
/// configuration that is not a smooth critical point).
class PreconditionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Combinatorial enumeration exceeded its configured cap.
class ResourceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace umorse
