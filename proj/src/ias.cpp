#include "tvbayes/ias.hpp"

#include <cmath>
#include <sstream>

#include "tvbayes/errors.hpp"

namespace tvbayes {
namespace {

double checked(double v, const char* name, int iteration) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    std::ostringstream os;
    os << "IAS iteration " << iteration << ": update of " << name << " gave " << v;
    throw NonfiniteError(os.str());
  }
  return v;
}

double scalar_mode(const GigParams& g, const char* name) {
  const double m = gig_mode(g);
  if (!(m > 0.0)) {
    std::ostringstream os;
    os << "conditional mode of " << name << " is " << m << " for " << g
       << "; the shape is too small for the improper prior";
    throw DegeneracyError(os.str());
  }
  return m;
}

}  // namespace

PcgResult ias_update_x(LatentState& s, const Vector& y, const ModelSpec& model, const PcgOptions& pcg) {
  const BlurOperator& h = model.blur();
  const DiffOperator& d = model.diff();
  const double c = s.lambda / s.nu;
  const Vector w = row_weights(model, s.r);
  const LinearOperator q = [&](const Vector& v, Vector& out) {
    out = weighted_gram_matvec(h, d, c, w, v);
  };
  const LinearOperator precond = jacobi_preconditioner(weighted_gram_diagonal(h, d, c, w));
  PcgResult res;
  try {
    res = pcg_solve(q, h.apply_adjoint(y), precond, pcg, s.x);
  } catch (const ConvergenceError& e) {
    // The outer sweep tolerates an inexact inner solve; the next solve
    // restarts from here.
    if (!(e.relative_residual() <= kInexactSolveLimit)) throw;
    res.x = e.best_iterate();
    res.iterations = e.iterations();
    res.relative_residual = e.relative_residual();
  }
  s.x = std::move(res.x);
  return res;
}

void ias_update_nu(LatentState& s, const Vector& y, const ModelSpec& model) {
  s.nu = scalar_mode(nu_conditional(s, y, model), "nu");
}

void ias_update_lambda(LatentState& s, const ModelSpec& model) {
  s.lambda = scalar_mode(lambda_conditional(s, model), "lambda");
}

void ias_update_r(LatentState& s, const ModelSpec& model) {
  const Vector sq = latent_squared_differences(model, model.diff().apply(s.x));
  for (Index l = 0; l < sq.size(); ++l) {
    const double m = gig_mode(r_conditional_from(model, s.lambda, sq[l]));
    if (!(m > 0.0)) {
      std::ostringstream os;
      os << "latent " << l << " collapsed to zero (its differences vanish under the exact "
         << "Laplace prior); use a safeguarded prior (e.g. --safeguard-b 0.001)";
      throw DegeneracyError(os.str());
    }
    s.r[l] = m;
  }
}

IasState ias_run(const Vector& y, const ModelSpec& model, const IasOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("ias_run: tol must be positive");
  if (opts.maxit < 1) throw DomainError("ias_run: maxit must be at least 1");
  IasState out;
  out.state = opts.init ? *opts.init : initial_state(y, model);
  LatentState& s = out.state;
  s.validate(model);

  auto record = [&]() {
    if (opts.record_substeps) out.substeps.push_back(log_posterior(s, y, model));
  };

  for (int it = 1; it <= opts.maxit; ++it) {
    const Vector x_old = s.x;
    const PcgResult solve = ias_update_x(s, y, model, opts.pcg);
    if (!s.x.allFinite()) {
      std::ostringstream os;
      os << "IAS iteration " << it << ": update of x is not finite";
      throw NonfiniteError(os.str());
    }
    record();
    ias_update_nu(s, y, model);
    checked(s.nu, "nu", it);
    record();
    ias_update_lambda(s, model);
    checked(s.lambda, "lambda", it);
    if (s.lambda < opts.lambda_min || s.lambda > opts.lambda_max) {
      std::ostringstream os;
      os << "degenerate regularisation at iteration " << it << ": lambda = " << s.lambda
         << (s.lambda > opts.lambda_max ? " (reconstruction collapsing to a blank image)"
                                        : " (reconstruction reverting to the data)");
      throw DivergenceError(os.str(), it, s.lambda);
    }
    record();
    ias_update_r(s, model);
    if (!s.r.allFinite()) {
      std::ostringstream os;
      os << "IAS iteration " << it << ": update of r is not finite";
      throw NonfiniteError(os.str());
    }
    record();

    const double xn = s.x.norm();
    const double change = (s.x - x_old).norm() / (xn > 0.0 ? xn : 1.0);
    out.trace.push_back({it, log_posterior(s, y, model), change, s.nu, s.lambda, solve.iterations,
                         solve.relative_residual});
    out.iterations = it;
    if (change < opts.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace tvbayes
