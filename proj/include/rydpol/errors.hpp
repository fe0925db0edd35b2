#pragma once

#include <stdexcept>
#include <string>

namespace rydpol {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument to a closed-form expression (sixth root of a negative,
// division by a zero detuning, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Configuration problem; `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rydpol
