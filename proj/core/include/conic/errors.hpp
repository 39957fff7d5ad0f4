#pragma once

#include <stdexcept>
#include <string>

namespace conic {

/// A point handed to a cone oracle lies outside the region the oracle is
/// defined on (not interior, wrong length, NaN).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The augmented Hessian failed its D - VVᵀ ≻ 0 check.
class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scalar Newton iteration ran out of iterations or left its domain.
class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric factorization was handed a matrix whose pattern differs from the
/// symbolic analysis.
class FactorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative refinement stopped decreasing the residual before reaching
/// tolerance.
class RefinementStall : public std::runtime_error {
 public:
  RefinementStall(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conic
