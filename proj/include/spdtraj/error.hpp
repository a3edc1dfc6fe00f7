#pragma once

#include <stdexcept>
#include <string>

namespace spdtraj {

// Input violates a documented precondition (shape, symmetry, monotonicity).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value left the range where a matrix function is defined (e.g. log of a
// non-positive eigenvalue).
class NumericalRangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Argument outside the mathematical domain of the operation (t outside [0,1],
// antipodal sphere log).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace spdtraj
