#pragma once

#include <stdexcept>
#include <string>

namespace hbdec {

/// Malformed or inconsistent user input. Maps to exit code 3 in the CLI.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text that does not follow the file grammar.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, int line, int column)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                   message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A broken internal invariant (a bug, never user error).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hbdec
