#include "tvbayes/gibbs.hpp"

#include <cmath>
#include <numeric>

#include "tvbayes/errors.hpp"
#include "tvbayes/solvers.hpp"

namespace tvbayes {

GibbsSampler::GibbsSampler(const Vector& y, const ModelSpec& model, std::uint64_t seed,
                           const std::optional<LatentState>& init)
    : y_(y), model_(model), rng_(seed) {
  require_dense_capacity(model.n_pixels(), "Gibbs sampler");
  gram_ = model.blur().gram_dense();
  hty_ = model.blur().apply_adjoint(y);
  state_ = init ? *init : initial_state(y, model);
  state_.validate(model);
}

void GibbsSampler::draw_x() {
  Matrix q = gram_;
  add_weighted_diff_gram(q, model_.diff(), state_.lambda / state_.nu, row_weights(model_, state_.r));
  const SpdFactor factor(q);
  state_.x = factor.sample(factor.solve(hty_), 1.0 / std::sqrt(state_.nu), rng_);
}

double GibbsSampler::sample_nu() { return gig_sample(nu_conditional(state_, y_, model_), rng_); }

double GibbsSampler::sample_lambda() {
  return gig_sample(lambda_conditional(state_, model_), rng_);
}

double GibbsSampler::sample_latent(Index latent) {
  return gig_sample(r_conditional(state_, model_, latent), rng_);
}

void GibbsSampler::draw_nu() { state_.nu = sample_nu(); }
void GibbsSampler::draw_lambda() { state_.lambda = sample_lambda(); }

void GibbsSampler::draw_r() {
  const Vector sq = latent_squared_differences(model_, model_.diff().apply(state_.x));
  for (Index l = 0; l < sq.size(); ++l) {
    const double r = gig_sample(r_conditional_from(model_, state_.lambda, sq[l]), rng_);
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw DegeneracyError(
          "latent draw underflowed to zero; use a safeguarded prior (e.g. --safeguard-b 0.001)");
    }
    state_.r[l] = r;
  }
}

void GibbsSampler::sweep() {
  draw_x();
  draw_nu();
  draw_lambda();
  draw_r();
}

double GibbsChain::nu_mean() const {
  return std::accumulate(nu_trace.begin(), nu_trace.end(), 0.0) / nu_trace.size();
}

double GibbsChain::lambda_mean() const {
  return std::accumulate(lambda_trace.begin(), lambda_trace.end(), 0.0) / lambda_trace.size();
}

int default_burn_in(int samples) { return samples / 5; }

GibbsChain gibbs_run(const Vector& y, const ModelSpec& model, const GibbsOptions& opts) {
  if (opts.samples < 1) throw DomainError("gibbs_run: at least one kept sample is required");
  if (opts.thinning < 1) throw DomainError("gibbs_run: thinning must be at least 1");
  GibbsChain chain;
  chain.seed = opts.seed;
  chain.samples = opts.samples;
  chain.thinning = opts.thinning;
  chain.burn_in = opts.burn_in < 0 ? default_burn_in(opts.samples) : opts.burn_in;

  GibbsSampler sampler(y, model, opts.seed, opts.init);
  for (int i = 0; i < chain.burn_in; ++i) sampler.sweep();

  const Index n = model.n_pixels();
  chain.mean = Vector::Zero(n);
  Vector m2 = Vector::Zero(n);
  chain.nu_trace.reserve(opts.samples);
  chain.lambda_trace.reserve(opts.samples);
  for (int k = 1; k <= opts.samples; ++k) {
    for (int t = 0; t < opts.thinning; ++t) sampler.sweep();
    const LatentState& s = sampler.state();
    // Welford update
    const Vector delta = s.x - chain.mean;
    chain.mean += delta / k;
    m2 += delta.cwiseProduct(s.x - chain.mean);
    chain.nu_trace.push_back(s.nu);
    chain.lambda_trace.push_back(s.lambda);
  }
  chain.variance = opts.samples > 1 ? Vector(m2 / (opts.samples - 1)) : Vector::Zero(n);
  chain.last = sampler.state();
  return chain;
}

}  // namespace tvbayes
