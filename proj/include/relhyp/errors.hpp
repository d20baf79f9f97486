#pragma once

#include <stdexcept>
#include <string>

namespace relhyp {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or JSON document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The subcomplex L handed to the relative construction is empty.
class EmptySubcomplexError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// No hyperbolization driver is registered for the requested dimension.
class DriverMissingError : public Error {
 public:
  using Error::Error;
};

/// Exact arithmetic left the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace relhyp
