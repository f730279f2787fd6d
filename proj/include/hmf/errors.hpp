#pragma once

#include <stdexcept>
#include <string>

namespace hmf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector too short to be normalized onto the sphere.
class DegenerateProjection : public Error {
 public:
  using Error::Error;
};

/// Surface parameters that cannot be realized as a valid mesh.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Inputs that violate an operation's preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The flow could not take an energy-decreasing step.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

/// Analysis result that cannot be trusted at the current resolution.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Symmetry that the construction guarantees was found broken.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration, carrying the offending line when known.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hmf
