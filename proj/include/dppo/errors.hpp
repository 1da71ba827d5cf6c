#ifndef DPPO_ERRORS_HPP_
#define DPPO_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dppo {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector or matrix dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An operation was invoked out of order (e.g. backward before forward).
class StateError : public Error {
 public:
  using Error::Error;
};

// A value that must be finite was NaN or infinite.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration, spec or argument.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized data (checkpoints, frames, CSV).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A blocking wait exceeded its deadline.
class TimeoutError : public Error {
 public:
  using Error::Error;
};

// Environment or transport failed at runtime.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

inline void require_shape(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

}  // namespace dppo

#endif  // DPPO_ERRORS_HPP_
