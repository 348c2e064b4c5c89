#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Argument outside the mathematical domain of an operation (m out of range,
// both sideband amplitudes zero, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Physically meaningful request that this library does not model, such as
// dark states for an odd number of ions.
class UnsupportedError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Simulation settings that violate a precondition: coarse time step,
// insufficient phonon headroom, dimension mismatch.
class ConfigurationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Dense full-space construction would exceed the supported size.
class ResourceError : public std::length_error {
public:
  using std::length_error::length_error;
};

// Numerical failure detected after the fact (norm drift).
class IntegrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace dicke
