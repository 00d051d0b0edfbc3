#pragma once

#include <stdexcept>
#include <string>

namespace majorana {

/// A physical or numerical parameter is outside its admissible range.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's precondition (e.g. non-Hermitian input).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A requested Hilbert space exceeds the configured dimension cap.
class ResourceLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Integration or quadrature did not converge.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace majorana
