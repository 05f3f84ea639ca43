#pragma once

#include <stdexcept>
#include <string>

namespace mtrl {

/// Raised when a numeric parameter is outside its admissible range.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when operands have incompatible shapes.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for empty or malformed data.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw InvalidParameter(what);
}

}  // namespace mtrl
