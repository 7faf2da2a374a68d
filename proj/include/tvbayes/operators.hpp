#pragma once

#include <vector>

#include "tvbayes/types.hpp"

namespace tvbayes {

/// k x n pixel grid. Images are stacked column by column: pixel (i, j)
/// lives at index i + j k.
class Lattice {
 public:
  Lattice(Index rows, Index cols);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index size() const { return rows_ * cols_; }
  Index index(Index i, Index j) const { return i + j * rows_; }
  Index row_of(Index idx) const { return idx % rows_; }
  Index col_of(Index idx) const { return idx / rows_; }
  bool is_1d() const { return rows_ == 1 || cols_ == 1; }

  bool operator==(const Lattice&) const = default;

 private:
  Index rows_;
  Index cols_;
};

/// Sparse difference operator. Each row is x[plus] - x[minus]; rows of the
/// identity operator (Lasso penalty) have no minus entry.
class DiffOperator {
 public:
  enum class Kind { PeriodicTv, Identity };
  static constexpr Index kNone = -1;

  /// Horizontal block (x_{i,j+1} - x_{i,j}) followed by the vertical block
  /// (x_{i+1,j} - x_{i,j}), both periodic. A block whose direction has
  /// extent 1 is dropped, so a 1 x n lattice yields the circulant first
  /// difference.
  static DiffOperator periodic(const Lattice& lattice);
  static DiffOperator identity(const Lattice& lattice);

  Kind kind() const { return kind_; }
  const Lattice& lattice() const { return lattice_; }
  Index rows() const { return static_cast<Index>(plus_.size()); }
  Index cols() const { return lattice_.size(); }
  Index plus(Index row) const { return plus_[row]; }
  Index minus(Index row) const { return minus_[row]; }
  /// True when both the horizontal and the vertical block are present.
  bool has_two_blocks() const { return two_blocks_; }
  /// Nullspace is the constant vectors.
  bool constant_nullspace() const { return kind_ == Kind::PeriodicTv; }

  Vector apply(const Vector& x) const;
  void apply(const Vector& x, Vector& out) const;
  Vector apply_adjoint(const Vector& d) const;
  void apply_adjoint(const Vector& d, Vector& out) const;
  Matrix dense() const;

 private:
  DiffOperator(Kind kind, const Lattice& lattice) : kind_(kind), lattice_(lattice) {}

  Kind kind_;
  Lattice lattice_;
  std::vector<Index> plus_;
  std::vector<Index> minus_;
  bool two_blocks_ = false;
};

/// Convolution mask with odd extents; weights(u, v) is centred at
/// (rows/2, cols/2).
struct Kernel {
  Matrix weights;

  Index rows() const { return weights.rows(); }
  Index cols() const { return weights.cols(); }
  double sum() const { return weights.sum(); }
  bool is_normalised(double tol = 1e-12) const;
  bool is_symmetric() const;
};

/// Sampled isotropic Gaussian on a size x size grid, normalised to sum 1.
/// sigma <= 0 selects size / 4.
Kernel gaussian_kernel(int size, double sigma = 0.0);
/// 1 x size Gaussian for signals.
Kernel gaussian_kernel_1d(int size, double sigma = 0.0);
double default_kernel_sigma(int size);
Kernel identity_kernel();

/// Periodic convolution H x on a lattice.
class BlurOperator {
 public:
  BlurOperator(Kernel kernel, const Lattice& lattice);

  const Kernel& kernel() const { return kernel_; }
  const Lattice& lattice() const { return lattice_; }
  Index size() const { return lattice_.size(); }

  Vector apply(const Vector& x) const;
  void apply(const Vector& x, Vector& out) const;
  /// Convolution with the flipped kernel.
  Vector apply_adjoint(const Vector& x) const;
  void apply_adjoint(const Vector& x, Vector& out) const;

  Matrix dense() const;
  /// H^T H assembled column by column.
  Matrix gram_dense() const;
  /// Diagonal entry of H^T H (the same for every pixel).
  double gram_diagonal() const;

 private:
  struct Tap {
    Index drow;
    Index dcol;
    double weight;
  };
  void convolve(const Vector& x, Vector& out, bool flip) const;

  Kernel kernel_;
  Lattice lattice_;
  std::vector<Tap> taps_;
};

/// (H^T H + c D^T W D) v with W = diag(weights), one weight per row of D.
Vector weighted_gram_matvec(const BlurOperator& h, const DiffOperator& d, double lambda_over_nu,
                            const Vector& weights, const Vector& v);

/// Diagonal of H^T H + c D^T W D, for Jacobi preconditioning.
Vector weighted_gram_diagonal(const BlurOperator& h, const DiffOperator& d,
                              double lambda_over_nu, const Vector& weights);

/// c D^T W D added into a dense matrix.
void add_weighted_diff_gram(Matrix& q, const DiffOperator& d, double lambda_over_nu,
                            const Vector& weights);

/// Nul(D) and Nul(H) intersect only in 0. For a periodic D (nullspace the
/// constants) this holds iff ||H 1|| > 1e-10 sqrt(N).
bool validate_rank_condition(const BlurOperator& h, const DiffOperator& d);

/// Throws CapacityError when n exceeds kDenseCapacity.
void require_dense_capacity(Index n, const char* what);

}  // namespace tvbayes
