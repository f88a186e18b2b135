#pragma once

#include <stdexcept>
#include <string>

namespace fockdelay {

// Invalid input: bad parameters, malformed config, unknown keys. The CLI maps
// this family to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A well-posed run that failed numerically (aliasing, window overflow,
// instability). The CLI maps this family to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

}  // namespace fockdelay
