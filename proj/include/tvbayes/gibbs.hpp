#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tvbayes/model.hpp"

namespace tvbayes {

struct GibbsOptions {
  std::uint64_t seed = 1;
  /// Kept samples.
  int samples = 10000;
  /// Discarded sweeps before the first kept sample; negative selects 20% of
  /// `samples`.
  int burn_in = -1;
  int thinning = 1;
  std::optional<LatentState> init;
};

/// Systematic-scan sampler over x, nu, lambda and the latents. The blocks
/// can also be drawn one at a time against a frozen state.
class GibbsSampler {
 public:
  /// Throws CapacityError above kDenseCapacity pixels.
  GibbsSampler(const Vector& y, const ModelSpec& model, std::uint64_t seed,
               const std::optional<LatentState>& init = std::nullopt);

  void draw_x();
  void draw_nu();
  void draw_lambda();
  void draw_r();
  void sweep();

  /// Draws from the conditional of one latent without changing the state.
  double sample_latent(Index latent);
  /// Draws from the nu / lambda conditionals without changing the state.
  double sample_nu();
  double sample_lambda();

  const LatentState& state() const { return state_; }
  LatentState& state() { return state_; }

 private:
  const Vector& y_;
  const ModelSpec& model_;
  Matrix gram_;
  Vector hty_;
  LatentState state_;
  Rng rng_;
};

struct GibbsChain {
  std::uint64_t seed = 0;
  int burn_in = 0;
  int samples = 0;
  int thinning = 1;
  Vector mean;          // running mean of kept x samples
  Vector variance;      // running unbiased variance of kept x samples
  std::vector<double> nu_trace;
  std::vector<double> lambda_trace;
  LatentState last;

  Vector sd() const { return variance.cwiseSqrt(); }
  double nu_mean() const;
  double lambda_mean() const;
};

GibbsChain gibbs_run(const Vector& y, const ModelSpec& model, const GibbsOptions& opts = {});

/// Burn-in used when GibbsOptions::burn_in is negative.
int default_burn_in(int samples);

}  // namespace tvbayes
