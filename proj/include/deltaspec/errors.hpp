#pragma once

#include <stdexcept>
#include <string>

namespace deltaspec {

// Base class for every failure raised by the library. The CLI maps these to
// exit code 1 (domain errors); anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Invalid configuration input. `pointer()` is a JSON pointer (RFC 6901) to
/// the offending field, e.g. "/points/2".
class ConfigError : public Error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : Error(message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }
  const char* kind() const noexcept override { return "config"; }

 private:
  std::string pointer_;
};

// Evaluation at a point where a kernel is singular (x == y, x on a center).
class SingularityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "singularity"; }
};

// Argument outside the domain of an operation (z <= 0 where z > 0 is needed,
// radius too large, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "singular_matrix"; }
};

// Gamma(z) is singular at the requested spectral parameter.
class PoleError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "pole"; }
};

// An iterative procedure failed to converge within its budget.
class NumericalFailure : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical_failure"; }
};

}  // namespace deltaspec
