#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrom {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// A file exists but its contents do not parse as the documented format.
class FormatError : public Error {
public:
  using Error::Error;
};

/// Parsed pieces of a bundle disagree with each other (dimensions, indices).
class ConsistencyError : public Error {
public:
  using Error::Error;
};

/// An in-memory value violates a documented invariant or precondition.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A run configuration asks for something the given inputs cannot provide.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A matrix factorization or other numerical kernel failed.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Full-order time integration produced NaN/Inf.
class BlowupError : public Error {
public:
  BlowupError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

/// Every calibration sweep run diverged; no usable objective exists.
class CalibrationError : public Error {
public:
  using Error::Error;
};

} // namespace lrom
