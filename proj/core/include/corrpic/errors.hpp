#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corrpic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch between operands (wrong side, non-square, bad bipartition).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a mathematical precondition (non-Hermitian, bad trace, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf produced during a computation; carries the step index when known.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, std::size_t step = npos)
      : Error(what), step_(step) {}
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace corrpic
