#pragma once

#include <stdexcept>
#include <string>

namespace gamble {

/// Base class for all errors raised by the library. The C API maps each
/// subclass onto one gamble_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contest or solver parameters outside their admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An input object (law, deviation, file) failed a consistency check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure did not converge or produced an inconsistent result.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace gamble
