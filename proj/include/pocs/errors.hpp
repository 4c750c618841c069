#pragma once

#include <stdexcept>
#include <string>

namespace pocs {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-conforming dimensions in a kernel or operator build.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// A parameter outside its admissible range (s > n, delta >= 1, ...).
struct InvalidParameter : Error {
  using Error::Error;
};

/// Structurally degenerate input (zero signal, ||Ax||_1 = 0).
struct DegenerateInput : Error {
  using Error::Error;
};

/// Request refused because it would exhaust a resource cap.
struct ResourceRefusal : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

/// Malformed input file; message carries the 1-based line number.
struct ParseError : Error {
  ParseError(const std::string& msg, long line) : Error(msg), line_number(line) {}
  long line_number;
};

}  // namespace pocs
