#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gm {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or input text. `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at column " + std::to_string(position + 1)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Identifier that is neither a coordinate, a known name nor a function.
class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t position)
      : ParseError("unknown identifier '" + name + "'", position), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Evaluation outside the domain of a subexpression (log of a nonpositive
/// number, division by zero, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : Error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// Chart, degree or shape mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition failed on the sampled region. `residual`
/// carries the offending magnitude when one is meaningful.
class PreconditionError : public Error {
 public:
  PreconditionError(std::string check, const std::string& what, double residual = 0.0)
      : Error(what), check_(std::move(check)), residual_(residual) {}
  const std::string& check() const noexcept { return check_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string check_;
  double residual_;
};

/// Invalid system definition. `line` and `column` are 1-based, 0 when the
/// location is unknown.
class SpecError : public Error {
 public:
  SpecError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A named object (scalar, field, form, ...) that the caller asked for is not
/// defined.
class NotFound : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: singular matrix, step underflow, leaving the chart box.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace gm
