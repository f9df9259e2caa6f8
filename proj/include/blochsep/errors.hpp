#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace blochsep {

/// A value is outside the domain an operation accepts.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sizes of inputs do not agree (vector length, profile mismatch).
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource cap was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A density-matrix invariant failed. `invariant()` is one of
/// "hermitian", "unit_trace", "positive_semidefinite".
class InvariantError : public DomainError {
 public:
  InvariantError(std::string invariant, const std::string& what)
      : DomainError(what), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

}  // namespace blochsep
