#pragma once

#include <stdexcept>
#include <string>

#include "aplab/rational.hpp"

namespace aplab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a domain invariant (non-monotone breakpoints,
/// non-positive slope, bad inverse pairing, failing relator).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Enclosure could not be narrowed to the requested tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Monotone inversion found no sign change within the bracket bound.
class BracketFailure : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class UnknownGenerator : public Error {
 public:
  explicit UnknownGenerator(const std::string& name)
      : Error("unknown generator '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class GeneratorMismatch : public Error {
 public:
  using Error::Error;
};

class NotAnIntervalAction : public Error {
 public:
  using Error::Error;
};

/// The action has a global fixed point where the escape sequence would go.
class FixedPointDetected : public Error {
 public:
  FixedPointDetected(Interval where, const std::string& detail)
      : Error("fixed point detected in " + where.lo.str() + ".." + where.hi.str() + ": " + detail),
        where_(std::move(where)) {}
  const Interval& where() const { return where_; }

 private:
  Interval where_;
};

/// Iterates left the configured magnitude bound.
class Overflow : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace aplab
