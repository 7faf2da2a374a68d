#include "tvbayes/harness/metrics.hpp"

#include <cmath>
#include <limits>

#include "tvbayes/errors.hpp"

namespace tvbayes {

Metrics compute_metrics(const Vector& x_hat, const Vector& x_true) {
  if (x_hat.size() != x_true.size() || x_true.size() == 0) {
    throw DomainError("compute_metrics: lengths differ");
  }
  const double err2 = (x_hat - x_true).squaredNorm();
  const double ref = x_true.norm();
  if (!(ref > 0.0)) throw DomainError("compute_metrics: reference image is zero");
  Metrics m;
  m.rel_l2 = std::sqrt(err2) / ref;
  const double peak = x_true.maxCoeff();
  m.psnr = err2 == 0.0 ? std::numeric_limits<double>::infinity()
                       : 10.0 * std::log10(peak * peak * x_true.size() / err2);
  return m;
}

}  // namespace tvbayes
