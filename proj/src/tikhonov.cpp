#include "tvbayes/tikhonov.hpp"

#include <cmath>

#include "tvbayes/errors.hpp"

namespace tvbayes {

PcgResult tikhonov_solve(const Vector& y, const BlurOperator& h, const DiffOperator& d,
                         double delta, const PcgOptions& opts) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("tikhonov: delta must be positive and finite");
  }
  const Vector ones = Vector::Ones(d.rows());
  const LinearOperator q = [&](const Vector& v, Vector& out) {
    out = weighted_gram_matvec(h, d, delta, ones, v);
  };
  return pcg_solve(q, h.apply_adjoint(y),
                   jacobi_preconditioner(weighted_gram_diagonal(h, d, delta, ones)), opts);
}

}  // namespace tvbayes
