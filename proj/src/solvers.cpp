#include "tvbayes/solvers.hpp"

#include <cmath>
#include <sstream>

#include "tvbayes/errors.hpp"

namespace tvbayes {

int default_pcg_maxit(Index n) {
  return std::max(10, static_cast<int>(std::ceil(10.0 * std::sqrt(static_cast<double>(n)))));
}

LinearOperator jacobi_preconditioner(Vector diagonal) {
  if ((diagonal.array() <= 0.0).any() || !diagonal.allFinite()) {
    throw DomainError("jacobi_preconditioner: diagonal must be positive and finite");
  }
  return [inv = Vector(diagonal.cwiseInverse())](const Vector& r, Vector& z) {
    z = r.cwiseProduct(inv);
  };
}

LinearOperator identity_preconditioner() {
  return [](const Vector& r, Vector& z) { z = r; };
}

PcgResult pcg_solve(const LinearOperator& a, const Vector& rhs, const LinearOperator& precond,
                    const PcgOptions& opts, const std::optional<Vector>& x0) {
  const Index n = rhs.size();
  const int maxit = opts.maxit > 0 ? opts.maxit : default_pcg_maxit(n);
  if (!(opts.tol > 0.0)) throw DomainError("pcg_solve: tolerance must be positive");
  const double rhs_norm = rhs.norm();
  if (!std::isfinite(rhs_norm)) throw NonfiniteError("pcg_solve: non-finite right-hand side");
  PcgResult out;
  if (rhs_norm == 0.0) {
    out.x = Vector::Zero(n);
    return out;
  }
  Vector x = x0 ? *x0 : Vector::Zero(n);
  if (x.size() != n) throw DomainError("pcg_solve: initial guess has wrong length");

  Vector r(n), z(n), p(n), ap(n);
  const auto true_residual = [&] {
    a(x, ap);
    r = rhs - ap;
    const double rel = r.norm() / rhs_norm;
    if (!std::isfinite(rel)) throw NonfiniteError("pcg_solve: non-finite residual");
    return rel;
  };

  double rel = true_residual();
  Vector best = x;
  double best_rel = rel;
  int it = 0;
  // Outer loop restarts from the true residual whenever the recursively
  // updated one claims convergence but the true one disagrees.
  while (rel > opts.tol && it < maxit) {
    precond(r, z);
    p = z;
    double rz = r.dot(z);
    while (it < maxit) {
      a(p, ap);
      const double pap = p.dot(ap);
      if (!std::isfinite(pap) || pap <= 0.0) {
        if (!std::isfinite(pap)) throw NonfiniteError("pcg_solve: breakdown (non-finite curvature)");
        break;  // loss of positive curvature; restart from the true residual
      }
      const double alpha = rz / pap;
      x += alpha * p;
      r -= alpha * ap;
      ++it;
      const double rec = r.norm() / rhs_norm;
      if (!std::isfinite(rec)) throw NonfiniteError("pcg_solve: breakdown (non-finite residual)");
      if (rec <= opts.tol) break;
      precond(r, z);
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    rel = true_residual();
    if (rel < best_rel) {
      best_rel = rel;
      best = x;
    }
  }
  if (rel > opts.tol) {
    std::ostringstream os;
    os << "pcg_solve: no convergence after " << it << " iterations (relative residual "
       << best_rel << ", tolerance " << opts.tol << ")";
    throw ConvergenceError(os.str(), best, it, best_rel);
  }
  out.x = std::move(x);
  out.iterations = it;
  out.relative_residual = rel;
  return out;
}

SpdFactor::SpdFactor(const Matrix& a) {
  if (a.rows() != a.cols()) throw DomainError("SpdFactor: matrix must be square");
  if (a.rows() > kDenseCapacity) {
    std::ostringstream os;
    os << "SpdFactor: dimension " << a.rows() << " exceeds dense capacity " << kDenseCapacity;
    throw CapacityError(os.str());
  }
  if (!a.allFinite()) throw NonfiniteError("SpdFactor: matrix has non-finite entries");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) {
    lower_ = llt.matrixL();
    if ((lower_.diagonal().array() > 0.0).all()) return;
  }
  // Locate the failing pivot with an unblocked left-looking factorisation.
  const Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "SpdFactor: matrix is not positive definite (pivot " << j << " = " << d << ")";
      throw NotSpdError(os.str(), j);
    }
    l(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  throw NotSpdError("SpdFactor: matrix is numerically not positive definite", n - 1);
}

Vector SpdFactor::solve(const Vector& rhs) const {
  Vector y = lower_.triangularView<Eigen::Lower>().solve(rhs);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix SpdFactor::inverse() const {
  Matrix linv = lower_.triangularView<Eigen::Lower>().solve(Matrix::Identity(size(), size()));
  return linv.transpose() * linv;
}

double SpdFactor::log_determinant() const {
  return 2.0 * lower_.diagonal().array().log().sum();
}

Vector SpdFactor::whiten_inverse(const Vector& z) const {
  return lower_.transpose().triangularView<Eigen::Upper>().solve(z);
}

Vector SpdFactor::sample(const Vector& mean, double scale, Rng& rng) const {
  std::normal_distribution<double> normal;
  Vector z(size());
  for (Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
  return mean + scale * whiten_inverse(z);
}

}  // namespace tvbayes
