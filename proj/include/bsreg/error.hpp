#pragma once

#include <stdexcept>
#include <string>

namespace bsreg {

// Base for every error raised by the library. The C API maps each subclass
// onto a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (x < 0 for a CDF,
// alpha <= 0, probability outside [0, 1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented precondition (dimension mismatch, bad index set).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Input data is unusable: malformed CSV, rank-deficient design, degenerate
// residuals.
class DataError : public Error {
 public:
  using Error::Error;
};

// Optimizer or numerical routine could not deliver a trustworthy answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Well-formed request outside what the model supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace bsreg
