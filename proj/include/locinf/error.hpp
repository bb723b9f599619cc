#pragma once

#include <stdexcept>
#include <string>

namespace locinf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (bad table, bad parameter, bad file).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An exponential-cost operation was asked to exceed its configured budget.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// The input does not have the shape an operation requires.
class UnsupportedTopology : public Error {
 public:
  using Error::Error;
};

}  // namespace locinf
