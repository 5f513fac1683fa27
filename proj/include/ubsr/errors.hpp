#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ubsr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied arguments was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Root bracketing failed: the monotone function never changed sign
/// within the expansion cap.
class BracketFailure : public Error {
 public:
  using Error::Error;
};

/// The acceptance set {t : L_F(t) <= lambda} is empty.
class EmptyAcceptanceSet : public Error {
 public:
  using Error::Error;
};

/// Overflow, NaN, or a degenerate derivative encountered mid-computation.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed input data. `row` and `column` are 1-based (row 1 is the header).
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t row, std::size_t column = 0)
      : Error(what), row_(row), column_(column) {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace ubsr
