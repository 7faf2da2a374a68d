#include "tvbayes/laplace.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <numbers>

#include "tvbayes/bessel.hpp"
#include "tvbayes/errors.hpp"
#include "tvbayes/solvers.hpp"

namespace tvbayes {

MvLaplaceParams::MvLaplaceParams(Vector mu, Matrix sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  if (sigma_.rows() != sigma_.cols() || sigma_.rows() != mu_.size() || mu_.size() == 0) {
    throw DomainError("MvLaplaceParams: sigma must be square and match mu");
  }
  if (!sigma_.isApprox(sigma_.transpose(), 1e-12)) {
    throw DomainError("MvLaplaceParams: sigma must be symmetric");
  }
  const SpdFactor f(sigma_);
  factor_ = f.lower();
  log_det_ = f.log_determinant();
}

double laplace1d_log_pdf(double mu, double b, double x) {
  if (!(b > 0.0)) throw DomainError("laplace1d_log_pdf: scale must be positive");
  return std::log(b / 2.0) - b * std::abs(x - mu);
}

double mvlaplace_log_pdf(const MvLaplaceParams& params, const Vector& x) {
  const Index n = params.dim();
  if (x.size() != n) throw DomainError("mvlaplace_log_pdf: dimension mismatch");
  const Vector z = params.sigma_factor().triangularView<Eigen::Lower>().solve(x - params.mu());
  const double quad = z.squaredNorm();
  const double nd = static_cast<double>(n);
  const double log_front =
      std::log(2.0) - 0.5 * nd * std::log(2.0 * std::numbers::pi) - 0.5 * params.log_det_sigma();
  if (quad == 0.0) {
    if (n == 1) {
      // Limit of K_{-1/2}(s) (s/2)^{1/2} as s -> 0 is sqrt(pi)/2.
      return log_front + 0.5 * std::log(std::numbers::pi) - std::log(2.0);
    }
    return std::numeric_limits<double>::infinity();
  }
  const double order = nd / 2.0 - 1.0;
  return log_front + log_bessel_k(order, std::sqrt(2.0 * quad)) -
         order * 0.5 * std::log(quad / 2.0);
}

Vector gsm_sample(const Vector& mu, const Matrix& sigma, const GigParams& mixing, Rng& rng) {
  if (sigma.rows() != mu.size() || sigma.cols() != mu.size()) {
    throw DomainError("gsm_sample: sigma must be square and match mu");
  }
  const SpdFactor f(sigma);
  std::normal_distribution<double> normal;
  Vector z(mu.size());
  for (Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
  const double r = gig_sample(mixing, rng);
  return mu + std::sqrt(r) * (f.lower() * z);
}

}  // namespace tvbayes
