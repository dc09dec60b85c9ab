#ifndef ELMLC_ERROR_HPP
#define ELMLC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elmlc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform (matrix product, model vs. input width, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A configuration value or argument violates its documented range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : Error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Non-finite values, SVD non-convergence, diverging training.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace elmlc

#endif  // ELMLC_ERROR_HPP
