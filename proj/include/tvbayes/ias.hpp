#pragma once

#include <optional>
#include <vector>

#include "tvbayes/model.hpp"
#include "tvbayes/solvers.hpp"

namespace tvbayes {

struct IasOptions {
  /// Stop when ||x_new - x_old|| < tol ||x_new||.
  double tol = 1e-6;
  int maxit = 200;
  PcgOptions pcg;
  std::optional<LatentState> init;
  /// Record the log posterior after every sub-update (x, nu, lambda, r).
  bool record_substeps = false;
  /// Divergence guard on lambda.
  double lambda_min = 1e-12;
  double lambda_max = 1e12;
};

struct IasTraceEntry {
  int iteration;
  double log_posterior;
  double x_change;
  double nu;
  double lambda;
  int pcg_iterations;
  double pcg_residual;
};

struct IasState {
  LatentState state;
  int iterations = 0;
  bool converged = false;
  std::vector<IasTraceEntry> trace;
  /// Four values per iteration when IasOptions::record_substeps is set.
  std::vector<double> substeps;
};

/// Conditional-mode coordinate ascent on the joint posterior. Throws
/// DivergenceError when lambda leaves [lambda_min, lambda_max],
/// DegeneracyError when a latent mode collapses to zero and NonfiniteError
/// on a non-finite update.
IasState ias_run(const Vector& y, const ModelSpec& model, const IasOptions& opts = {});

/// Largest relative residual accepted from a PCG solve that ran out of
/// iterations; beyond it the ConvergenceError propagates.
inline constexpr double kInexactSolveLimit = 1e-3;

/// Individual sub-updates, each setting one block to its conditional mode.
/// ias_update_x returns the PCG outcome (x is stored in the state).
PcgResult ias_update_x(LatentState& s, const Vector& y, const ModelSpec& model, const PcgOptions& pcg);
void ias_update_nu(LatentState& s, const Vector& y, const ModelSpec& model);
void ias_update_lambda(LatentState& s, const ModelSpec& model);
void ias_update_r(LatentState& s, const ModelSpec& model);

}  // namespace tvbayes
