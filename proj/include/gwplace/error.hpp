#pragma once

#include <stdexcept>
#include <string>

namespace gwplace {

// Base of every error raised by the library. Each subclass maps to one
// failure category so callers (the CLI in particular) can pick an exit code
// without parsing messages.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or parameter value (negative radius, unknown NodeId, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Nonpositive distance handed to the force law.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Topology file that is not JSON or does not follow the schema.
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DuplicateIdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CoincidentNodeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfBoundsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Random generation could not produce a connected topology.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Operation requires a connected topology and did not get one.
class DisconnectedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant (e.g. a path that walks over a non-edge).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gwplace
