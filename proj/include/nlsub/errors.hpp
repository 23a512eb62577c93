#pragma once

#include <stdexcept>
#include <string>

namespace nlsub {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physically meaningless input (negative width, unsupported preset, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration document failed validation. `field()` names the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A quadrature grid cannot represent the integrand (span or resolution).
class GridError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlsub
