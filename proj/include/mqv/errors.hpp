#pragma once

#include <stdexcept>
#include <string>

namespace mqv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition or shape contract was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An exact-only routine received floating-point data (or the reverse).
class ModeError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// A factor (1 + x_h x_hbar) or a loop map is singular.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string arrow)
      : Error(what), arrow_(std::move(arrow)) {}
  const std::string& arrow() const noexcept { return arrow_; }

 private:
  std::string arrow_;
};

/// Reflection or convolution requested at a vertex carrying a loop.
class LoopError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// The reflected dimension vector has a negative entry, so the target space is empty.
class EmptinessError : public Error {
 public:
  using Error::Error;
};

/// A theorem-level precondition (e.g. surjectivity of tau) does not hold.
class PreconditionFailure : public Error {
 public:
  using Error::Error;
};

/// A map that must be injective at a stable point is not.
class StabilityViolation : public Error {
 public:
  using Error::Error;
};

/// Randomized generation exhausted its budget.
class GenerationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace mqv
