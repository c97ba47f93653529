#pragma once

#include <stdexcept>
#include <string>

namespace fconn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input (files, flags that fail to parse).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a contract (negative weight, self-loop,
/// incompatible options, empty search space where one is required).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An iterative method did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Argument outside the domain of a scalar function (e.g. resolvent pole).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap (memory budget) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace fconn
