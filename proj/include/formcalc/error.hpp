#pragma once

#include <stdexcept>
#include <string>

namespace formcalc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different coordinate spaces or have incompatible shapes.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Forms of different degree were combined where equal degree is required.
class DegreeMismatch : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Evaluation left the real domain of an elementary function (log of a
/// non-positive number).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structural problem in an expression tree or an unsupported construct.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class MissingConnection : public Error {
 public:
  MissingConnection() : Error("manifold has no connection") {}
};

class MissingMetric : public Error {
 public:
  MissingMetric() : Error("manifold has no metric") {}
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

/// A closed form was required (antiderivative) but the input is not closed.
class NotClosed : public Error {
 public:
  using Error::Error;
};

/// Input leaves the function class an algorithm supports exactly.
class UnsupportedClass : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Syntax error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace formcalc
