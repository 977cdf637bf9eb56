#pragma once

#include <stdexcept>
#include <string>

namespace heatdml {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A required column or config key is missing or has the wrong shape.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Data violates a domain invariant (range, ordering, positivity).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied argument is outside the function's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// The computation is well-posed but the data makes it singular
// (zero treatment variance, collinear regressors, ...).
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// Filesystem trouble: unreadable input, unwritable output.
class IoError : public Error {
 public:
  using Error::Error;
};

// Remote weather service failed: auth, rate limit, malformed payload.
class ApiError : public Error {
 public:
  using Error::Error;
};

}  // namespace heatdml
