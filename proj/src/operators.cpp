#include "tvbayes/operators.hpp"

#include <cmath>
#include <sstream>

#include "tvbayes/errors.hpp"

namespace tvbayes {
namespace {

Index wrap(Index i, Index n) {
  const Index m = i % n;
  return m < 0 ? m + n : m;
}

}  // namespace

Lattice::Lattice(Index rows, Index cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw DomainError("Lattice: extents must be at least 1");
}

void require_dense_capacity(Index n, const char* what) {
  if (n > kDenseCapacity) {
    std::ostringstream os;
    os << what << ": N = " << n << " exceeds the dense capacity of " << kDenseCapacity
       << " pixels; use the IAS (MAP) estimator for large images";
    throw CapacityError(os.str());
  }
}

DiffOperator DiffOperator::periodic(const Lattice& lattice) {
  if (lattice.size() < 2) throw DomainError("DiffOperator: lattice needs at least two pixels");
  DiffOperator d(Kind::PeriodicTv, lattice);
  const Index k = lattice.rows();
  const Index n = lattice.cols();
  const bool horizontal = n > 1;
  const bool vertical = k > 1;
  d.two_blocks_ = horizontal && vertical;
  const Index blocks = (horizontal ? 1 : 0) + (vertical ? 1 : 0);
  d.plus_.reserve(blocks * lattice.size());
  d.minus_.reserve(blocks * lattice.size());
  if (horizontal) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < k; ++i) {
        d.plus_.push_back(lattice.index(i, wrap(j + 1, n)));
        d.minus_.push_back(lattice.index(i, j));
      }
    }
  }
  if (vertical) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < k; ++i) {
        d.plus_.push_back(lattice.index(wrap(i + 1, k), j));
        d.minus_.push_back(lattice.index(i, j));
      }
    }
  }
  return d;
}

DiffOperator DiffOperator::identity(const Lattice& lattice) {
  DiffOperator d(Kind::Identity, lattice);
  d.plus_.resize(lattice.size());
  d.minus_.assign(lattice.size(), kNone);
  for (Index i = 0; i < lattice.size(); ++i) d.plus_[i] = i;
  return d;
}

void DiffOperator::apply(const Vector& x, Vector& out) const {
  if (x.size() != cols()) throw DomainError("DiffOperator::apply: length mismatch");
  out.resize(rows());
  for (Index r = 0; r < rows(); ++r) {
    const Index m = minus_[r];
    out[r] = x[plus_[r]] - (m == kNone ? 0.0 : x[m]);
  }
}

Vector DiffOperator::apply(const Vector& x) const {
  Vector out;
  apply(x, out);
  return out;
}

void DiffOperator::apply_adjoint(const Vector& d, Vector& out) const {
  if (d.size() != rows()) throw DomainError("DiffOperator::apply_adjoint: length mismatch");
  out.setZero(cols());
  for (Index r = 0; r < rows(); ++r) {
    out[plus_[r]] += d[r];
    const Index m = minus_[r];
    if (m != kNone) out[m] -= d[r];
  }
}

Vector DiffOperator::apply_adjoint(const Vector& d) const {
  Vector out;
  apply_adjoint(d, out);
  return out;
}

Matrix DiffOperator::dense() const {
  require_dense_capacity(cols(), "DiffOperator::dense");
  Matrix m = Matrix::Zero(rows(), cols());
  for (Index r = 0; r < rows(); ++r) {
    m(r, plus_[r]) += 1.0;
    if (minus_[r] != kNone) m(r, minus_[r]) -= 1.0;
  }
  return m;
}

bool Kernel::is_normalised(double tol) const {
  return (weights.array() >= 0.0).all() && std::abs(sum() - 1.0) <= tol;
}

bool Kernel::is_symmetric() const {
  return weights.isApprox(weights.reverse(), 1e-14) || weights == weights.reverse();
}

double default_kernel_sigma(int size) { return size / 4.0; }

namespace {

Kernel sampled_gaussian(int rows, int cols, double sigma) {
  if (rows < 1 || cols < 1 || rows % 2 == 0 || cols % 2 == 0) {
    throw DomainError("gaussian_kernel: size must be odd and at least 1");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("gaussian_kernel: sigma must be finite");
  }
  Kernel k{Matrix(rows, cols)};
  const int hr = rows / 2;
  const int hc = cols / 2;
  for (int u = -hr; u <= hr; ++u) {
    for (int v = -hc; v <= hc; ++v) {
      k.weights(u + hr, v + hc) = std::exp(-0.5 * (u * u + v * v) / (sigma * sigma));
    }
  }
  // sigma -> 0 concentrates all mass on the centre tap.
  if (!(k.weights.sum() > 0.0) || !k.weights.allFinite()) {
    k.weights.setZero();
    k.weights(hr, hc) = 1.0;
  }
  k.weights /= k.weights.sum();
  return k;
}

}  // namespace

Kernel gaussian_kernel(int size, double sigma) {
  if (size < 1 || size % 2 == 0) throw DomainError("gaussian_kernel: size must be odd");
  return sampled_gaussian(size, size, sigma > 0.0 ? sigma : default_kernel_sigma(size));
}

Kernel gaussian_kernel_1d(int size, double sigma) {
  if (size < 1 || size % 2 == 0) throw DomainError("gaussian_kernel: size must be odd");
  return sampled_gaussian(1, size, sigma > 0.0 ? sigma : default_kernel_sigma(size));
}

Kernel identity_kernel() { return Kernel{Matrix::Ones(1, 1)}; }

BlurOperator::BlurOperator(Kernel kernel, const Lattice& lattice)
    : kernel_(std::move(kernel)), lattice_(lattice) {
  if (kernel_.rows() % 2 == 0 || kernel_.cols() % 2 == 0 || kernel_.rows() < 1) {
    throw DomainError("BlurOperator: kernel extents must be odd");
  }
  if (!kernel_.weights.allFinite()) throw NonfiniteError("BlurOperator: non-finite kernel weight");
  const Index hr = kernel_.rows() / 2;
  const Index hc = kernel_.cols() / 2;
  for (Index u = 0; u < kernel_.rows(); ++u) {
    for (Index v = 0; v < kernel_.cols(); ++v) {
      const double w = kernel_.weights(u, v);
      if (w != 0.0) taps_.push_back({u - hr, v - hc, w});
    }
  }
}

// out(i, j) = sum_taps w x(i - du, j - dv); the adjoint uses x(i + du, j + dv).
void BlurOperator::convolve(const Vector& x, Vector& out, bool flip) const {
  if (x.size() != size()) throw DomainError("BlurOperator: length mismatch");
  const Index k = lattice_.rows();
  const Index n = lattice_.cols();
  out.setZero(size());
  const double* src = x.data();
  double* dst = out.data();
  for (const Tap& t : taps_) {
    const Index du = flip ? -t.drow : t.drow;
    const Index dv = flip ? -t.dcol : t.dcol;
    const Index shift = wrap(-du, k);
    for (Index j = 0; j < n; ++j) {
      const double* col = src + wrap(j - dv, n) * k;
      double* dcol = dst + j * k;
      // Rows i map to source rows (i - du) mod k: two contiguous runs.
      const Index first = k - shift;
      for (Index i = 0; i < first; ++i) dcol[i] += t.weight * col[i + shift];
      for (Index i = first; i < k; ++i) dcol[i] += t.weight * col[i + shift - k];
    }
  }
}

void BlurOperator::apply(const Vector& x, Vector& out) const { convolve(x, out, false); }
void BlurOperator::apply_adjoint(const Vector& x, Vector& out) const { convolve(x, out, true); }

Vector BlurOperator::apply(const Vector& x) const {
  Vector out;
  apply(x, out);
  return out;
}

Vector BlurOperator::apply_adjoint(const Vector& x) const {
  Vector out;
  apply_adjoint(x, out);
  return out;
}

Matrix BlurOperator::dense() const {
  require_dense_capacity(size(), "BlurOperator::dense");
  Matrix m(size(), size());
  Vector e = Vector::Zero(size());
  Vector col;
  for (Index c = 0; c < size(); ++c) {
    e[c] = 1.0;
    apply(e, col);
    m.col(c) = col;
    e[c] = 0.0;
  }
  return m;
}

Matrix BlurOperator::gram_dense() const {
  require_dense_capacity(size(), "BlurOperator::gram_dense");
  Matrix m(size(), size());
  Vector e = Vector::Zero(size());
  Vector hx;
  Vector col;
  for (Index c = 0; c < size(); ++c) {
    e[c] = 1.0;
    apply(e, hx);
    apply_adjoint(hx, col);
    m.col(c) = col;
    e[c] = 0.0;
  }
  return m;
}

double BlurOperator::gram_diagonal() const {
  // Fold the kernel onto the lattice so that wrapped taps alias correctly;
  // a column of H then holds the folded weights.
  const Index k = lattice_.rows();
  const Index n = lattice_.cols();
  Matrix folded = Matrix::Zero(k, n);
  for (const Tap& t : taps_) folded(wrap(t.drow, k), wrap(t.dcol, n)) += t.weight;
  return folded.squaredNorm();
}

Vector weighted_gram_matvec(const BlurOperator& h, const DiffOperator& d, double lambda_over_nu,
                            const Vector& weights, const Vector& v) {
  if (weights.size() != d.rows()) throw DomainError("weighted_gram_matvec: weight count mismatch");
  if (!weights.allFinite() || !std::isfinite(lambda_over_nu)) {
    throw NonfiniteError("weighted_gram_matvec: non-finite weights");
  }
  if ((weights.array() < 0.0).any() || lambda_over_nu < 0.0) {
    throw DomainError("weighted_gram_matvec: weights must be nonnegative");
  }
  Vector out = h.apply_adjoint(h.apply(v));
  if (lambda_over_nu != 0.0) {
    Vector dv = d.apply(v);
    dv.array() *= weights.array();
    out += lambda_over_nu * d.apply_adjoint(dv);
  }
  return out;
}

Vector weighted_gram_diagonal(const BlurOperator& h, const DiffOperator& d,
                              double lambda_over_nu, const Vector& weights) {
  Vector diag = Vector::Constant(h.size(), h.gram_diagonal());
  for (Index r = 0; r < d.rows(); ++r) {
    const double w = lambda_over_nu * weights[r];
    diag[d.plus(r)] += w;
    if (d.minus(r) != DiffOperator::kNone) diag[d.minus(r)] += w;
  }
  return diag;
}

void add_weighted_diff_gram(Matrix& q, const DiffOperator& d, double lambda_over_nu,
                            const Vector& weights) {
  for (Index r = 0; r < d.rows(); ++r) {
    const double w = lambda_over_nu * weights[r];
    const Index p = d.plus(r);
    const Index m = d.minus(r);
    q(p, p) += w;
    if (m != DiffOperator::kNone) {
      q(m, m) += w;
      q(p, m) -= w;
      q(m, p) -= w;
    }
  }
}

bool validate_rank_condition(const BlurOperator& h, const DiffOperator& d) {
  if (!d.constant_nullspace()) return true;
  const Vector ones = Vector::Ones(h.size());
  return h.apply(ones).norm() > 1e-10 * std::sqrt(static_cast<double>(h.size()));
}

}  // namespace tvbayes
