#pragma once

#include <stdexcept>
#include <string>

namespace arena {

/// Base of every error raised by the library. Messages are single-line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch between arrays, layers or action vectors.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value where a finite one is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Violated precondition of an operation.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Two artifacts that cannot be combined (e.g. layouts of different width).
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

/// Corrupt, truncated or version-mismatched persisted data.
class LoadError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace arena
