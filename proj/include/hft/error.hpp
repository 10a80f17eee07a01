#pragma once

#include <stdexcept>
#include <string>

namespace hft {

// Violated precondition: bad dimensions, out-of-domain parameters, malformed input.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not produce a trustworthy answer.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Eigenvector matching between neighbouring parameter values was ambiguous.
class TrackingError : public NumericError {
 public:
  using NumericError::NumericError;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace hft
