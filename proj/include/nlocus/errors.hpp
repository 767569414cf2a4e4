#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlocus {

// Violated preconditions (bad input, wrong field, degenerate data).
// The command-line tool maps these to exit code 2.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public PreconditionError {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : PreconditionError(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class DegreeMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class FieldMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DivisionByZero : public PreconditionError {
 public:
  DivisionByZero() : PreconditionError("division by zero") {}
};

// The twisted Jacobian ideal fails to vanish in the given degree.
class NotTransversal : public PreconditionError {
 public:
  explicit NotTransversal(int degree)
      : PreconditionError("surface is not transversal: quotient nonzero in degree " +
                          std::to_string(degree)),
        degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

class Degenerate : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A computation hit an internal limit or an unexpected state.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative numeric method did not reach the requested accuracy.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlocus
