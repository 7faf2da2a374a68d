#pragma once

#include <Eigen/Cholesky>
#include <functional>
#include <optional>

#include "tvbayes/types.hpp"

namespace tvbayes {

/// y = A x. Output is preallocated to the right size.
using LinearOperator = std::function<void(const Vector& x, Vector& y)>;

struct PcgOptions {
  /// Stop when ||A x - b|| <= tol ||b||.
  double tol = 1e-8;
  /// 0 selects 10 sqrt(N).
  int maxit = 0;
};

struct PcgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Preconditioned conjugate gradients for a symmetric positive definite A.
/// Throws ConvergenceError (carrying the best iterate) when maxit is reached
/// and NonfiniteError on breakdown.
PcgResult pcg_solve(const LinearOperator& a, const Vector& rhs, const LinearOperator& precond,
                    const PcgOptions& opts = {}, const std::optional<Vector>& x0 = std::nullopt);

/// z = r / diag elementwise.
LinearOperator jacobi_preconditioner(Vector diagonal);
LinearOperator identity_preconditioner();

int default_pcg_maxit(Index n);

/// Dense Cholesky factorisation A = L L^T.
class SpdFactor {
 public:
  /// Throws NotSpdError with the failing pivot index, CapacityError above
  /// kDenseCapacity.
  explicit SpdFactor(const Matrix& a);

  Index size() const { return lower_.rows(); }
  const Matrix& lower() const { return lower_; }

  Vector solve(const Vector& rhs) const;
  Matrix inverse() const;
  double log_determinant() const;
  /// L^{-T} z: maps a standard normal z to a N(0, A^{-1}) draw.
  Vector whiten_inverse(const Vector& z) const;
  /// mean + scale L^{-T} z with z ~ N(0, I).
  Vector sample(const Vector& mean, double scale, Rng& rng) const;

 private:
  Matrix lower_;
};

}  // namespace tvbayes
