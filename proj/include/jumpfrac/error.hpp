#pragma once

#include <stdexcept>
#include <string>

namespace jumpfrac {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed configuration, out-of-range parameter, violated
/// precondition. Maps to exit status 1.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Syntax error with a 1-based position (column for expressions, line for
/// configuration files).
class ParseError : public ValidationError {
public:
  ParseError(const std::string& what, int position)
      : ValidationError(what + " (at " + std::to_string(position) + ")"),
        position_(position) {}
  int position() const noexcept { return position_; }

private:
  int position_;
};

/// Failure during a numerical computation: non-finite state, division by
/// zero, divergent or non-convergent integral. Maps to exit status 2.
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace jumpfrac
