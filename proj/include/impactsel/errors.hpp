#pragma once

#include <stdexcept>
#include <string>

namespace impactsel {

// Invalid or inconsistent input data (files, shapes, grids, argument ranges).
// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (non-positive-definite factorization, degenerate
// denominators, failed replications). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace impactsel
