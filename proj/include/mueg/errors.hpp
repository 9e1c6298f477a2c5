#pragma once

#include <stdexcept>
#include <string>

namespace mueg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unsupported dimension or grid too small for the requested operator.
struct DimensionError : Error {
  using Error::Error;
};

// Input outside the documented preconditions.
struct DomainError : Error {
  using Error::Error;
};

// NaN, non-convergence, or disagreement between independent evaluation paths.
struct NumericalError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

}  // namespace mueg
