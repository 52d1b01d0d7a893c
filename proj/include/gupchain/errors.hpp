#pragma once

#include <stdexcept>
#include <string>

namespace gupchain {

// Exit-code mapping used by the command line: ConfigError -> 1,
// NumericalFailure -> 2, InvariantViolation -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Hessian with a non-positive (or numerically negligible) eigenvalue.
class UnstableChainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace gupchain
