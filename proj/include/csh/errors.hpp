#pragma once

#include <stdexcept>
#include <string>

namespace csh {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// API misuse: wrong field representation, mismatched grids, bad parameters.
struct UsageError : Error {
  using Error::Error;
};

// Config-file rejection; line is 1-based, 0 when not tied to a line.
struct ParseError : Error {
  ParseError(const std::string& what, int line_no)
      : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what
                          : what),
        line(line_no) {}
  int line;
};

// Malformed or truncated snapshot file.
struct FormatError : Error {
  using Error::Error;
};

// Initial data that cannot satisfy the Gauss-type constraint on the torus
// (nonzero mean of Im(conj(phi0)*phi1)), or a free gauge part with curl.
struct IncompatibleDataError : Error {
  using Error::Error;
};

// Non-finite field values produced by a time step.
struct BlowUpError : Error {
  BlowUpError(const std::string& what, double when) : Error(what), t(when) {}
  double t;
};

}  // namespace csh
