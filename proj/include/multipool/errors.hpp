#pragma once

#include <stdexcept>
#include <string>

namespace multipool {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (index out of range,
/// probability outside [0,1], mismatched dimensions, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested field order is not in the built-in table.
class UnsupportedField : public Error {
 public:
  using Error::Error;
};

/// Multiplicity exceeds the maximal q+1 for an n = q^2 multipool.
class DesignBound : public Error {
 public:
  using Error::Error;
};

/// A formula is requested outside the hypotheses under which it holds.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// No multiplicity within the cap meets the requested Type I budget.
class Infeasible : public Error {
 public:
  Infeasible(const std::string& what, double raw_bound)
      : Error(what), raw_bound_(raw_bound) {}
  double raw_bound() const noexcept { return raw_bound_; }

 private:
  double raw_bound_;
};

/// An equation has no root in the admissible interval.
class NoSolution : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }
  std::size_t line_;
  std::size_t column_;
};

}  // namespace multipool
