#pragma once

#include <stdexcept>
#include <string>

namespace dts {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operand dimensions do not match the operation.
struct ShapeError : Error {
  using Error::Error;
};

// A documented precondition was violated (non-Hermitian input,
// unnormalized state, broken pairing constraint, ...).
struct ContractViolation : Error {
  using Error::Error;
};

// An iterative numerical routine failed to converge.
struct NumericalError : Error {
  using Error::Error;
};

// The time stepper could not proceed (step-size underflow, stiffness).
struct IntegrationError : Error {
  using Error::Error;
};

// A physical invariant (trace, Hermiticity, positivity) drifted past
// its tolerance during integration.
struct IntegrityError : Error {
  using Error::Error;
};

// Malformed or inconsistent experiment configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace dts
