#pragma once

#include <stdexcept>
#include <string>

namespace modcls {

/// Malformed input: bad syntax, unknown names, inconsistent declarations.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax error carrying a 1-based source location.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, int line, int column)
      : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// A mathematical precondition failed (division by zero, table mismatch, ...).
class MathError : public std::runtime_error {
 public:
  explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

/// Two independent computations that must agree did not. Indicates a bug.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace modcls
