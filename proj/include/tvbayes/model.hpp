#pragma once

#include <string>

#include "tvbayes/gig.hpp"
#include "tvbayes/operators.hpp"
#include "tvbayes/types.hpp"

namespace tvbayes {

/// Gamma hyperpriors lambda ~ Gam(alpha_lambda, beta_lambda) and
/// nu ~ Gam(alpha_nu, beta_nu). All zero is the improper 1/lambda, 1/nu prior.
struct HyperParams {
  double alpha_lambda = 0.0;
  double beta_lambda = 0.0;
  double alpha_nu = 0.0;
  double beta_nu = 0.0;

  void validate() const;
};

enum class PriorKind { LaplaceTv, StudentTv, Laplace2d, CustomGig };

/// PerEdge: one latent r per row of D. PerPixel: one latent per pixel shared
/// by its horizontal and vertical difference.
enum class LatentLayout { PerEdge, PerPixel };

class PriorVariant {
 public:
  static constexpr double kDefaultSafeguard = 0.001;

  /// Mixing GIG(2, b, 1); b = 0 is the exact exponential mixing.
  static PriorVariant laplace_tv(double safeguard_b = kDefaultSafeguard);
  /// Mixing GIG(0, w, -w/2), i.e. InvGamma(w/2, w/2).
  static PriorVariant student_tv(double dof);
  /// Per-pixel latents; default mixing Exp(1).
  static PriorVariant laplace_2d(const GigParams& mixing = GigParams(2.0, 0.0, 1.0));
  static PriorVariant custom_gig(const GigParams& mixing);

  PriorKind kind() const { return kind_; }
  const GigParams& mixing() const { return mixing_; }
  LatentLayout layout() const {
    return kind_ == PriorKind::Laplace2d ? LatentLayout::PerPixel : LatentLayout::PerEdge;
  }
  std::string name() const;

 private:
  PriorVariant(PriorKind kind, GigParams mixing) : kind_(kind), mixing_(mixing) {}

  PriorKind kind_;
  GigParams mixing_;
};

std::string to_string(PriorKind kind);

class ModelSpec {
 public:
  /// Throws ModelError when the rank condition fails, the operators live on
  /// different lattices, or a per-pixel prior is paired with an operator
  /// lacking both difference blocks.
  ModelSpec(BlurOperator blur, DiffOperator diff, HyperParams hyper, PriorVariant prior);

  const Lattice& lattice() const { return blur_.lattice(); }
  const BlurOperator& blur() const { return blur_; }
  const DiffOperator& diff() const { return diff_; }
  const HyperParams& hyper() const { return hyper_; }
  const PriorVariant& prior() const { return prior_; }

  /// Number of pixels.
  Index n_pixels() const { return blur_.size(); }
  /// Number of difference rows.
  Index n_rows() const { return diff_.rows(); }
  Index n_latents() const;
  Index latent_of_row(Index row) const;
  /// Difference rows sharing one latent (1 or 2).
  int rows_per_latent() const { return prior_.layout() == LatentLayout::PerPixel ? 2 : 1; }

  /// Shape of the lambda conditional: M/2 + alpha_lambda, M = rows of D.
  double lambda_shape() const;
  /// Shape of the nu conditional: N/2 + alpha_nu.
  double nu_shape() const;
  /// Exponent of each r in the joint density: p - 1 - rows_per_latent / 2.
  double latent_exponent() const;

 private:
  BlurOperator blur_;
  DiffOperator diff_;
  HyperParams hyper_;
  PriorVariant prior_;
};

struct LatentState {
  Vector x;
  double nu = 1.0;
  double lambda = 1.0;
  Vector r;

  /// Throws DomainError unless nu, lambda and every r are positive and finite
  /// and the lengths fit the model.
  void validate(const ModelSpec& model) const;
};

/// 1 / (2 r) for every row of D (the diagonal of R^{-2}).
Vector row_weights(const ModelSpec& model, const Vector& r);
/// Sum of squared differences over the rows attached to each latent.
Vector latent_squared_differences(const ModelSpec& model, const Vector& dx);
/// ||R^{-1} D x||^2 given D x.
double weighted_penalty(const ModelSpec& model, const Vector& r, const Vector& dx);

/// Log of the joint density of (x, nu, lambda, r | y) up to an additive
/// constant that depends on neither the state nor the data.
double log_posterior(const LatentState& state, const Vector& y, const ModelSpec& model);

/// The two quadratic exponents of x:
///   direct    = -(nu/2) ||y - Hx||^2 - (lambda/2) ||R^{-1} D x||^2
///   completed = -(nu/2) [(x - xq)^T Q (x - xq) + y^T y - xq^T Q xq],
/// with Q = H^T H + (lambda/nu) D^T R^{-2} D and xq = Q^{-1} H^T y.
struct QuadraticForms {
  double direct;
  double completed;
};
QuadraticForms quadratic_exponents(const LatentState& state, const Vector& y,
                                   const ModelSpec& model);

/// x | rest ~ N(mean, (nu Q)^{-1}).
struct XConditional {
  Vector mean;
  double nu;
  double lambda_over_nu;
  Vector weights;  // per-row diagonal of R^{-2}
};

/// Solves for the mean with PCG (tol 1e-12; a stalled solve is accepted down
/// to 1e-10).
XConditional x_conditional(const LatentState& state, const Vector& y, const ModelSpec& model);
GigParams nu_conditional(const LatentState& state, const Vector& y, const ModelSpec& model);
GigParams lambda_conditional(const LatentState& state, const ModelSpec& model);
/// GIG(a, b + (lambda/2) sum d^2, p - rows/2). Throws DegeneracyError when the
/// result is inadmissible (zero differences under a prior with b = 0 and p
/// small enough).
GigParams r_conditional(const LatentState& state, const ModelSpec& model, Index latent);
/// Same from a precomputed squared-difference sum.
GigParams r_conditional_from(const ModelSpec& model, double lambda, double sq_sum);

/// Noise sd estimated from the median absolute periodic difference of y.
double robust_noise_sigma(const Vector& y, const Lattice& lattice);

/// Data-driven starting point: x = y, r at the mixing prior mean (or its
/// mode when the mean diverges), nu = 1 / sigma^2 from robust_noise_sigma,
/// lambda = M / ||R^{-1} D y||^2.
/// Starting from x = H^T y instead makes the first solve oversmooth badly
/// enough that IAS can run off to the blank-image mode on large phantoms.
LatentState initial_state(const Vector& y, const ModelSpec& model);

}  // namespace tvbayes
