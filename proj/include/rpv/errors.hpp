#pragma once

#include <stdexcept>
#include <string>

namespace welfare {

// Malformed input: bad files, bad flags, violated call preconditions.
// The command line maps this family to exit code 2.
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Numeric degeneracy discovered while computing: zero variances, singular
// correlation matrices, empty resample intersections, undefined functionals.
// The command line maps this family to exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace welfare
