#pragma once

#include <stdexcept>
#include <string>

namespace streamrate {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs violate a precondition (bad matrix, out-of-range parameter, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed on otherwise valid inputs.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The requested target lies below what double precision can resolve.
class PrecisionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// No test channel in the search bracket meets the distortion target.
class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An internal consistency check between two computation routes failed.
class InternalError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace streamrate
