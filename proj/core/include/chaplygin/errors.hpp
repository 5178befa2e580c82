#pragma once

#include <stdexcept>
#include <string>

namespace chaplygin {

// Operands of incompatible dimension (vectors, skew matrices, operators).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Physical or model parameters outside their admissible region, e.g. a
// violated 0 < a_i a_j < D.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A point outside the domain of a formula: gamma = 0, a non-orthogonal
// rotation, a singular linear system, a chart boundary.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace chaplygin
