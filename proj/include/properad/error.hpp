#pragma once

#include <stdexcept>
#include <string>

namespace properad {

// Raised when an operation's precondition is violated (arity mismatch,
// unknown vertex, incomplete composition table, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input-format error carrying the 1-based line it was detected on (0 when the
// error is not tied to a line, e.g. a JSON structure problem).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace properad
