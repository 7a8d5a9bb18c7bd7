#pragma once

#include <stdexcept>
#include <string>

namespace tkl {

// Seed or solve ran out of iterations before the residual dropped below tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoConvergedBranch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The bisection indicator has the same value at both ends of the bracket.
class BracketFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDensityMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingColumn : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_positive_temperature(double t) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("temperature must be strictly positive, got " + std::to_string(t));
  }
}

}  // namespace tkl
