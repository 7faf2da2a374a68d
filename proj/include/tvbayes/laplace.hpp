#pragma once

#include "tvbayes/gig.hpp"
#include "tvbayes/types.hpp"

namespace tvbayes {

/// Location and scale of a multivariate Laplace law
///   f(x) = 2 / ((2 pi)^{n/2} |S|^{1/2}) K_{n/2-1}(sqrt(2 Q)) / sqrt(Q/2)^{n/2-1},
///   Q = (x-mu)^T S^{-1} (x-mu).
/// The scale matrix must pass a Cholesky factorisation.
class MvLaplaceParams {
 public:
  MvLaplaceParams(Vector mu, Matrix sigma);

  const Vector& mu() const { return mu_; }
  const Matrix& sigma() const { return sigma_; }
  Index dim() const { return mu_.size(); }
  /// Lower Cholesky factor of sigma.
  const Matrix& sigma_factor() const { return factor_; }
  double log_det_sigma() const { return log_det_; }

 private:
  Vector mu_;
  Matrix sigma_;
  Matrix factor_;
  double log_det_;
};

/// log of (b/2) exp(-b |x - mu|).
double laplace1d_log_pdf(double mu, double b, double x);

/// Returns +infinity at x = mu when n >= 2, where the density is singular.
double mvlaplace_log_pdf(const MvLaplaceParams& params, const Vector& x);

/// mu + sqrt(r) S^{1/2} z with r ~ mixing and z standard normal. Exp(1)
/// mixing gives the multivariate Laplace law; InvGamma(w/2, w/2) gives a
/// Student t with w degrees of freedom.
Vector gsm_sample(const Vector& mu, const Matrix& sigma, const GigParams& mixing, Rng& rng);

}  // namespace tvbayes
