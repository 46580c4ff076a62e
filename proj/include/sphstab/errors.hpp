#pragma once

#include <stdexcept>
#include <string>

namespace sphstab {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of mismatched or unsupported dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a formula (asin of something >= 1, bad angle range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A stability hypothesis (separation, epsilon range, origin in hull, k = f0) is violated.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Pairwise structure that no admissible configuration can have.
class StructuralViolation : public Error {
 public:
  using Error::Error;
};

/// Linear-programming certificate whose sign conditions fail.
class CertificateError : public Error {
 public:
  CertificateError(const std::string& what, double violating_t)
      : Error(what), violating_t_(violating_t) {}
  double violating_t() const noexcept { return violating_t_; }

 private:
  double violating_t_;
};

/// Malformed JSON or CSV input.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace sphstab
