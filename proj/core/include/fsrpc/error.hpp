#pragma once

#include <stdexcept>
#include <string>

namespace fsrpc {

// Library-level failure (validation or domain error). The CLI maps these to
// exit code 1.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Failure while reading a text input. line/col are 1-based; 0 means unknown.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line = 0, int col = 0)
      : Error(format(msg, line, col)), line_(line), col_(col) {}

  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }

private:
  static std::string format(const std::string& msg, int line, int col) {
    if (line <= 0) return msg;
    std::string s = "line " + std::to_string(line);
    if (col > 0) s += ", col " + std::to_string(col);
    return s + ": " + msg;
  }

  int line_;
  int col_;
};

}  // namespace fsrpc
