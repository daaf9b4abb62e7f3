#pragma once

#include <stdexcept>
#include <string>

namespace consgain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument combination (family parameters, gains, grid axes, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed graph document (edge list or JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A scalar function was evaluated outside the set where it is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structural precondition failed, e.g. the graph is disconnected.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure, non-finite state, refinement failure.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// No closed form exists for the requested input.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace consgain
