#include "tvbayes/vb.hpp"

#include <cmath>
#include <sstream>

#include "tvbayes/errors.hpp"
#include "tvbayes/solvers.hpp"

namespace tvbayes {
namespace {

double positive_finite(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    std::ostringstream os;
    os << "VB: " << what << " is " << v;
    throw NonfiniteError(os.str());
  }
  return v;
}

}  // namespace

VbState vb_initialise(const Vector& y, const ModelSpec& model,
                      const std::optional<LatentState>& init) {
  require_dense_capacity(model.n_pixels(), "VB");
  const LatentState s = init ? *init : initial_state(y, model);
  s.validate(model);
  VbState v;
  v.mean = s.x;
  v.cov = Matrix::Zero(model.n_pixels(), model.n_pixels());
  v.nu_shape = model.nu_shape();
  v.nu_rate = v.nu_shape / s.nu;
  v.lambda_shape = model.lambda_shape();
  v.lambda_rate = v.lambda_shape / s.lambda;
  v.e_inv_r = s.r.cwiseInverse();
  v.e_sq_diff = model.diff().apply(s.x).array().square();
  const GigParams& mix = model.prior().mixing();
  v.r_factors.assign(model.n_latents(), mix);
  return v;
}

double vb_sweep(VbState& v, const Vector& y, const ModelSpec& model) {
  const BlurOperator& h = model.blur();
  const DiffOperator& d = model.diff();
  const HyperParams& hp = model.hyper();

  // x-factor: N(Q^{-1} H^T y, (nu Q)^{-1}) with R^{-2} replaced by E(R^{-2}).
  const double nu_bar = v.nu_mean();
  const double lambda_bar = v.lambda_mean();
  Vector w(model.n_rows());
  for (Index row = 0; row < w.size(); ++row) w[row] = 0.5 * v.e_inv_r[model.latent_of_row(row)];
  const Matrix gram = h.gram_dense();
  Matrix q = gram;
  add_weighted_diff_gram(q, d, lambda_bar / nu_bar, w);
  const SpdFactor factor(q);
  const Vector old_mean = v.mean;
  v.mean = factor.solve(h.apply_adjoint(y));
  v.cov = factor.inverse() / nu_bar;
  if (!v.mean.allFinite() || !v.cov.allFinite()) throw NonfiniteError("VB: x-factor not finite");

  // nu-factor
  const double misfit = (y - h.apply(v.mean)).squaredNorm();
  const double trace_term = v.cov.cwiseProduct(gram).sum();
  v.nu_shape = model.nu_shape();
  v.nu_rate = positive_finite(0.5 * misfit + 0.5 * trace_term + hp.beta_nu, "nu rate");

  // E((D x)^2) from E(x x^T) = C + m m^T.
  const Vector dm = d.apply(v.mean);
  for (Index row = 0; row < d.rows(); ++row) {
    const Index p = d.plus(row);
    const Index m = d.minus(row);
    double var = v.cov(p, p);
    if (m != DiffOperator::kNone) var += v.cov(m, m) - 2.0 * v.cov(p, m);
    v.e_sq_diff[row] = dm[row] * dm[row] + var;
  }

  // lambda-factor
  double penalty = 0.0;
  for (Index row = 0; row < d.rows(); ++row) {
    penalty += v.e_inv_r[model.latent_of_row(row)] * v.e_sq_diff[row];
  }
  v.lambda_shape = model.lambda_shape();
  v.lambda_rate = positive_finite(0.25 * penalty + hp.beta_lambda, "lambda rate");

  // r-factors
  const double lambda_new = v.lambda_mean();
  const Vector sq = latent_squared_differences(model, v.e_sq_diff.cwiseSqrt());
  for (Index l = 0; l < model.n_latents(); ++l) {
    v.r_factors[l] = r_conditional_from(model, lambda_new, sq[l]);
    v.e_inv_r[l] = positive_finite(gig_moment(v.r_factors[l], -1.0), "E(1/r)");
  }

  const double mn = v.mean.norm();
  return (v.mean - old_mean).norm() / (mn > 0.0 ? mn : 1.0);
}

VbState vb_run(const Vector& y, const ModelSpec& model, const VbOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("vb_run: tol must be positive");
  if (opts.maxit < 1) throw DomainError("vb_run: maxit must be at least 1");
  VbState v = vb_initialise(y, model, opts.init);
  for (int it = 1; it <= opts.maxit; ++it) {
    const double change = vb_sweep(v, y, model);
    v.trace.push_back({it, change, v.nu_mean(), v.lambda_mean()});
    v.iterations = it;
    if (change < opts.tol) {
      v.converged = true;
      break;
    }
  }
  return v;
}

}  // namespace tvbayes
