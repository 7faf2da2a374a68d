#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "tvbayes/types.hpp"

namespace tvbayes {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function or distribution.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Result not representable in the linear domain; use the log variant.
class RangeError : public Error {
 public:
  using Error::Error;
};

class MomentDivergesError : public Error {
 public:
  using Error::Error;
};

/// A computation produced NaN or infinity.
class NonfiniteError : public Error {
 public:
  using Error::Error;
};

/// A latent conditional collapsed (zero difference under the exact Laplace prior).
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Problem too large for the dense code paths.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Model failed validation (rank condition, incompatible prior/operator).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// The regularisation parameter ran off to 0 or infinity.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int iteration, double lambda)
      : Error(what), iteration_(iteration), lambda_(lambda) {}
  int iteration() const { return iteration_; }
  double lambda() const { return lambda_; }

 private:
  int iteration_;
  double lambda_;
};

/// Matrix not positive definite; carries the failing Cholesky pivot.
class NotSpdError : public Error {
 public:
  NotSpdError(const std::string& what, Index pivot) : Error(what), pivot_(pivot) {}
  Index pivot() const { return pivot_; }

 private:
  Index pivot_;
};

/// Conjugate gradients did not reach tolerance. Carries the best iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Vector best, int iterations, double residual)
      : Error(what), best_(std::move(best)), iterations_(iterations), residual_(residual) {}
  const Vector& best_iterate() const { return best_; }
  int iterations() const { return iterations_; }
  double relative_residual() const { return residual_; }

 private:
  Vector best_;
  int iterations_;
  double residual_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tvbayes
