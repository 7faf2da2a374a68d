#include "tvbayes/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "tvbayes/errors.hpp"
#include "tvbayes/solvers.hpp"

namespace tvbayes {
namespace {

void require_term(double v, const char* block) {
  if (!std::isfinite(v)) {
    throw NonfiniteError(std::string("log_posterior: non-finite ") + block + " term");
  }
}

// x log(v) with the convention 0 log 0 = 0 for vanishing coefficients.
double xlogy(double coef, double v) { return coef == 0.0 ? 0.0 : coef * std::log(v); }

}  // namespace

void HyperParams::validate() const {
  for (double v : {alpha_lambda, beta_lambda, alpha_nu, beta_nu}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("HyperParams: hyperparameters must be finite and nonnegative");
    }
  }
}

PriorVariant PriorVariant::laplace_tv(double safeguard_b) {
  if (!(safeguard_b >= 0.0) || !std::isfinite(safeguard_b)) {
    throw DomainError("laplace prior: safeguard b must be nonnegative");
  }
  return {PriorKind::LaplaceTv, GigParams(2.0, safeguard_b, 1.0)};
}

PriorVariant PriorVariant::student_tv(double dof) {
  if (!(dof > 0.0) || !std::isfinite(dof)) {
    throw DomainError("student prior: degrees of freedom must be positive");
  }
  return {PriorKind::StudentTv, GigParams(0.0, dof, -dof / 2.0)};
}

PriorVariant PriorVariant::laplace_2d(const GigParams& mixing) {
  return {PriorKind::Laplace2d, mixing};
}

PriorVariant PriorVariant::custom_gig(const GigParams& mixing) {
  return {PriorKind::CustomGig, mixing};
}

std::string to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::LaplaceTv: return "laplace";
    case PriorKind::StudentTv: return "student";
    case PriorKind::Laplace2d: return "laplace2d";
    case PriorKind::CustomGig: return "gig";
  }
  return "gig";
}

std::string PriorVariant::name() const {
  std::ostringstream os;
  os << to_string(kind_) << " " << mixing_;
  return os.str();
}

ModelSpec::ModelSpec(BlurOperator blur, DiffOperator diff, HyperParams hyper, PriorVariant prior)
    : blur_(std::move(blur)), diff_(std::move(diff)), hyper_(hyper), prior_(prior) {
  hyper_.validate();
  if (!(blur_.lattice() == diff_.lattice())) {
    throw ModelError("blur and difference operators are defined on different lattices");
  }
  if (prior_.layout() == LatentLayout::PerPixel && !diff_.has_two_blocks()) {
    throw ModelError(
        "the two-dimensional Laplace prior needs a k x n lattice with k, n >= 2 and a "
        "periodic difference operator");
  }
  if (!validate_rank_condition(blur_, diff_)) {
    throw ModelError(
        "rank condition fails: the blur kernel annihilates constant images (||H 1|| ~ 0), "
        "so Q is singular");
  }
}

Index ModelSpec::n_latents() const {
  return prior_.layout() == LatentLayout::PerPixel ? n_pixels() : n_rows();
}

Index ModelSpec::latent_of_row(Index row) const {
  return prior_.layout() == LatentLayout::PerPixel ? row % n_pixels() : row;
}

double ModelSpec::lambda_shape() const {
  return 0.5 * static_cast<double>(n_rows()) + hyper_.alpha_lambda;
}

double ModelSpec::nu_shape() const {
  return 0.5 * static_cast<double>(n_pixels()) + hyper_.alpha_nu;
}

double ModelSpec::latent_exponent() const {
  return prior_.mixing().p() - 1.0 - 0.5 * rows_per_latent();
}

void LatentState::validate(const ModelSpec& model) const {
  if (x.size() != model.n_pixels()) throw DomainError("state: x has the wrong length");
  if (r.size() != model.n_latents()) throw DomainError("state: r has the wrong length");
  if (!x.allFinite()) throw NonfiniteError("state: x is not finite");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("state: nu must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("state: lambda must be positive");
  }
  if (!r.allFinite() || !(r.array() > 0.0).all()) {
    throw DomainError("state: every r must be positive and finite");
  }
}

Vector row_weights(const ModelSpec& model, const Vector& r) {
  const Index m = model.n_rows();
  Vector w(m);
  for (Index row = 0; row < m; ++row) w[row] = 0.5 / r[model.latent_of_row(row)];
  return w;
}

Vector latent_squared_differences(const ModelSpec& model, const Vector& dx) {
  Vector s = Vector::Zero(model.n_latents());
  for (Index row = 0; row < dx.size(); ++row) s[model.latent_of_row(row)] += dx[row] * dx[row];
  return s;
}

double weighted_penalty(const ModelSpec& model, const Vector& r, const Vector& dx) {
  double total = 0.0;
  for (Index row = 0; row < dx.size(); ++row) {
    total += dx[row] * dx[row] / (2.0 * r[model.latent_of_row(row)]);
  }
  return total;
}

double log_posterior(const LatentState& state, const Vector& y, const ModelSpec& model) {
  state.validate(model);
  if (y.size() != model.n_pixels()) throw DomainError("log_posterior: y has the wrong length");
  const HyperParams& hp = model.hyper();
  const GigParams& mix = model.prior().mixing();

  const double misfit = (y - model.blur().apply(state.x)).squaredNorm();
  const double penalty = weighted_penalty(model, state.r, model.diff().apply(state.x));

  const double lam = xlogy(model.lambda_shape() - 1.0, state.lambda) - hp.beta_lambda * state.lambda;
  require_term(lam, "lambda");
  const double nu = xlogy(model.nu_shape() - 1.0, state.nu) - hp.beta_nu * state.nu;
  require_term(nu, "nu");
  const double e = model.latent_exponent();
  double latent = 0.0;
  for (Index l = 0; l < state.r.size(); ++l) {
    const double r = state.r[l];
    latent += xlogy(e, r) - 0.5 * mix.a() * r - 0.5 * mix.b() / r;
  }
  require_term(latent, "r");
  const double likelihood = -0.5 * state.nu * misfit;
  require_term(likelihood, "likelihood");
  const double prior = -0.5 * state.lambda * penalty;
  require_term(prior, "prior");
  return lam + nu + latent + likelihood + prior;
}

QuadraticForms quadratic_exponents(const LatentState& state, const Vector& y,
                                   const ModelSpec& model) {
  state.validate(model);
  const BlurOperator& h = model.blur();
  const DiffOperator& d = model.diff();
  const double misfit = (y - h.apply(state.x)).squaredNorm();
  const double penalty = weighted_penalty(model, state.r, d.apply(state.x));
  const double direct = -0.5 * state.nu * misfit - 0.5 * state.lambda * penalty;

  const Vector w = row_weights(model, state.r);
  const double c = state.lambda / state.nu;
  const Vector hty = h.apply_adjoint(y);
  Vector xq;
  if (model.n_pixels() <= kDenseCapacity) {
    Matrix q = h.gram_dense();
    add_weighted_diff_gram(q, d, c, w);
    xq = SpdFactor(q).solve(hty);
  } else {
    xq = x_conditional(state, y, model).mean;
  }
  const Vector diff = state.x - xq;
  const double quad = diff.dot(weighted_gram_matvec(h, d, c, w, diff));
  const double xqx = xq.dot(weighted_gram_matvec(h, d, c, w, xq));
  const double completed = -0.5 * state.nu * (quad + y.squaredNorm() - xqx);
  return {direct, completed};
}

XConditional x_conditional(const LatentState& state, const Vector& y, const ModelSpec& model) {
  state.validate(model);
  const BlurOperator& h = model.blur();
  const DiffOperator& d = model.diff();
  XConditional xc;
  xc.nu = state.nu;
  xc.lambda_over_nu = state.lambda / state.nu;
  xc.weights = row_weights(model, state.r);
  const LinearOperator q = [&](const Vector& v, Vector& out) {
    out = weighted_gram_matvec(h, d, xc.lambda_over_nu, xc.weights, v);
  };
  PcgOptions opts;
  opts.tol = 1e-12;
  opts.maxit = 20 * default_pcg_maxit(model.n_pixels());
  const Vector diag = weighted_gram_diagonal(h, d, xc.lambda_over_nu, xc.weights);
  try {
    xc.mean = pcg_solve(q, h.apply_adjoint(y), jacobi_preconditioner(diag), opts, state.x).x;
  } catch (const ConvergenceError& e) {
    // On badly conditioned Q the true residual can stall just above 1e-12.
    if (!(e.relative_residual() <= 1e-10)) throw;
    xc.mean = e.best_iterate();
  }
  return xc;
}

GigParams nu_conditional(const LatentState& state, const Vector& y, const ModelSpec& model) {
  const double misfit = (y - model.blur().apply(state.x)).squaredNorm();
  const double rate = 0.5 * misfit + model.hyper().beta_nu;
  if (!(rate > 0.0)) {
    throw DegeneracyError("nu conditional is improper: zero residual and beta_nu = 0");
  }
  return GigParams::gamma(model.nu_shape(), rate);
}

GigParams lambda_conditional(const LatentState& state, const ModelSpec& model) {
  const double penalty = weighted_penalty(model, state.r, model.diff().apply(state.x));
  const double rate = 0.5 * penalty + model.hyper().beta_lambda;
  if (!(rate > 0.0)) {
    throw DegeneracyError("lambda conditional is improper: D x = 0 and beta_lambda = 0");
  }
  return GigParams::gamma(model.lambda_shape(), rate);
}

GigParams r_conditional_from(const ModelSpec& model, double lambda, double sq_sum) {
  const GigParams& mix = model.prior().mixing();
  const double a = mix.a();
  const double b = mix.b() + 0.5 * lambda * sq_sum;
  const double p = mix.p() - 0.5 * model.rows_per_latent();
  if (!GigParams::admissible(a, b, p)) {
    std::ostringstream os;
    os << "latent conditional GIG(" << a << ", " << b << ", " << p
       << ") is inadmissible: a difference is exactly zero under a mixing density with b = 0; "
          "use a safeguarded prior (e.g. --safeguard-b 0.001)";
    throw DegeneracyError(os.str());
  }
  return {a, b, p};
}

GigParams r_conditional(const LatentState& state, const ModelSpec& model, Index latent) {
  if (latent < 0 || latent >= model.n_latents()) throw DomainError("r_conditional: bad index");
  const Vector sq = latent_squared_differences(model, model.diff().apply(state.x));
  return r_conditional_from(model, state.lambda, sq[latent]);
}

double robust_noise_sigma(const Vector& y, const Lattice& lattice) {
  if (y.size() != lattice.size()) throw DomainError("robust_noise_sigma: length mismatch");
  if (lattice.size() < 2) return 0.0;
  Vector dy = DiffOperator::periodic(lattice).apply(y).cwiseAbs();
  std::vector<double> v(dy.data(), dy.data() + dy.size());
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  // Differences of iid noise have sd sqrt(2) sigma; 0.6745 is the normal MAD.
  double sigma = *mid / (0.6744897501960817 * std::sqrt(2.0));
  if (!(sigma > 0.0)) sigma = dy.norm() / std::sqrt(2.0 * static_cast<double>(dy.size()));
  return sigma;
}

LatentState initial_state(const Vector& y, const ModelSpec& model) {
  if (y.size() != model.n_pixels()) throw DomainError("initial_state: data have the wrong length");
  if (!y.allFinite()) throw NonfiniteError("initial_state: data contain non-finite values");
  const GigParams& mix = model.prior().mixing();
  double r0;
  try {
    r0 = gig_mean(mix);
  } catch (const MomentDivergesError&) {
    r0 = gig_mode(mix);
  }
  if (!(r0 > 0.0)) r0 = 1.0;

  LatentState s;
  s.x = y;
  s.r = Vector::Constant(model.n_latents(), r0);
  const double n = static_cast<double>(model.n_pixels());
  const double floor = 1e-12 * std::max(y.squaredNorm() / n, 1e-300);
  const double sigma = robust_noise_sigma(y, model.lattice());
  s.nu = 1.0 / std::max(sigma * sigma, floor);
  const double penalty = weighted_penalty(model, s.r, model.diff().apply(s.x));
  s.lambda = static_cast<double>(model.n_rows()) / std::max(penalty, floor);
  return s;
}

}  // namespace tvbayes
