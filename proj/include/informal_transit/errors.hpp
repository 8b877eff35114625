#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace informal_transit {

// Bad parameters or preconditions. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Operation asked for outside the regime where its closed form holds.
class RegimeError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// A ratio whose denominator is zero.
class UndefinedRatioError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed instance text. Maps to CLI exit code 2.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

} // namespace informal_transit
