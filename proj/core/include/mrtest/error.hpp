#pragma once

#include <stdexcept>
#include <string>

namespace mrtest {

/// Base for all errors raised by the library. Callers that only care about
/// "bad input" can catch this; the CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observable is not Hermitian or does not square to the identity.
class InvalidObservable : public Error {
 public:
  using Error::Error;
};

/// A model, table or moment set breaks one of its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (JSON syntax or missing/mistyped field).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrtest
