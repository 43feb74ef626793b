#pragma once

#include <stdexcept>
#include <string>

namespace farpoint {

/// Malformed input: dimension mismatch, empty lists, out-of-range parameters.
class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A driver was called on an instance that does not satisfy its precondition
/// (wrong case label, no interior point, ...).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed-form construction cannot be carried out for the given data.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative numerics failed in a way the caller has to know about.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace farpoint
