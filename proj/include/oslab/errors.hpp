#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oslab {

// Parameter outside the mathematical domain (non-positive mass, odd lattice).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Objects living on different lattices or with incompatible shapes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller violated a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Time shift pushes a functional off the lattice.
class RangeError : public std::out_of_range {
 public:
  RangeError(const std::string& what, std::size_t max_step)
      : std::out_of_range(what), max_step_(max_step) {}
  std::size_t max_step() const noexcept { return max_step_; }

 private:
  std::size_t max_step_;
};

// Symmetric factorization failed; carries the offending spectrum bound.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// J-Gram matrix is indefinite: the measure is not reflection positive on
// the chosen observables, so no physical Hilbert space exists.
class ReflectionPositivityViolation : public std::runtime_error {
 public:
  ReflectionPositivityViolation(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class DegenerateSpace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal consistency failure in a numerical construction (asymmetric Gram,
// non-positive transfer spectrum).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oslab
