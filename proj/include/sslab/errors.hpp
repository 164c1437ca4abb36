#pragma once

#include <stdexcept>
#include <string>

namespace sslab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation
/// (e.g. an energy inside the continuous spectrum).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A recurrence or iteration produced a non-finite value.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, long index)
      : Error(what + " (index " + std::to_string(index) + ")"), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

/// Two routes that must agree did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to meet its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ThresholdNotFound : public Error {
 public:
  ThresholdNotFound(const std::string& what, double lo, double hi)
      : Error(what + " in bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        lo_(lo),
        hi_(hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_, hi_;
};

}  // namespace sslab
