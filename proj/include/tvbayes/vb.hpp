#pragma once

#include <optional>
#include <vector>

#include "tvbayes/model.hpp"

namespace tvbayes {

struct VbOptions {
  /// Stop when the relative change of the x-factor mean drops below tol.
  double tol = 1e-6;
  int maxit = 200;
  std::optional<LatentState> init;
};

struct VbTraceEntry {
  int iteration;
  double x_change;
  double nu_mean;
  double lambda_mean;
};

/// Mean-field factors q(x) q(nu) q(lambda) q(r).
struct VbState {
  Vector mean;        // x-factor mean
  Matrix cov;         // x-factor covariance (nu Q)^{-1} at the factor means
  double nu_shape = 0.0;
  double nu_rate = 0.0;
  double lambda_shape = 0.0;
  double lambda_rate = 0.0;
  std::vector<GigParams> r_factors;
  Vector e_inv_r;     // E(1/r) per latent
  Vector e_sq_diff;   // E((D x)_row^2) per row of D
  int iterations = 0;
  bool converged = false;
  std::vector<VbTraceEntry> trace;

  double nu_mean() const { return nu_shape / nu_rate; }
  double lambda_mean() const { return lambda_shape / lambda_rate; }
  Vector marginal_sd() const { return cov.diagonal().cwiseSqrt(); }
};

/// Starting factors built from a latent state (defaults to initial_state).
VbState vb_initialise(const Vector& y, const ModelSpec& model,
                      const std::optional<LatentState>& init = std::nullopt);

/// One cyclic update of x, nu, lambda and r. Returns the relative change of
/// the x-factor mean.
double vb_sweep(VbState& state, const Vector& y, const ModelSpec& model);

/// Throws CapacityError above kDenseCapacity pixels.
VbState vb_run(const Vector& y, const ModelSpec& model, const VbOptions& opts = {});

}  // namespace tvbayes
