#pragma once

#include <stdexcept>
#include <string>

namespace ccl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Parameter value at which the requested object degenerates (k = 0, 1, -2 ...).
class DegenerateParameter : public Error {
 public:
  using Error::Error;
};

class IntegralityError : public Error {
 public:
  using Error::Error;
};

class SingularPointError : public Error {
 public:
  using Error::Error;
};

class SingularCurveError : public Error {
 public:
  using Error::Error;
};

class InvalidBranch : public Error {
 public:
  using Error::Error;
};

class TraceError : public Error {
 public:
  using Error::Error;
};

class DegenerateSteinian : public Error {
 public:
  using Error::Error;
};

class DegeneratePolar : public Error {
 public:
  using Error::Error;
};

/// A float sign decision fell inside the tolerance band.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccl
