#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "tvbayes/errors.hpp"
#include "tvbayes/operators.hpp"

using namespace tvbayes;

namespace {

Index wrap(Index i, Index n) { return ((i % n) + n) % n; }

// Dense periodic convolution written out from the definition:
// (H x)(i, j) = sum_{u, v} w(u, v) x(i - u + c_r, j - v + c_c).
Matrix dense_blur(const Kernel& k, Index rows, Index cols) {
  const Index n = rows * cols;
  Matrix h = Matrix::Zero(n, n);
  const Index cr = k.rows() / 2, cc = k.cols() / 2;
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      for (Index u = 0; u < k.rows(); ++u) {
        for (Index v = 0; v < k.cols(); ++v) {
          const Index si = wrap(i - (u - cr), rows);
          const Index sj = wrap(j - (v - cc), cols);
          h(i + j * rows, si + sj * rows) += k.weights(u, v);
        }
      }
    }
  }
  return h;
}

// Horizontal then vertical periodic differences, from the index notation.
Matrix dense_diff(Index rows, Index cols) {
  const Index n = rows * cols;
  const bool horiz = cols > 1, vert = rows > 1;
  Matrix d = Matrix::Zero((horiz + vert) * n, n);
  Index r = 0;
  if (horiz) {
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i, ++r) {
        d(r, i + wrap(j + 1, cols) * rows) += 1.0;
        d(r, i + j * rows) -= 1.0;
      }
    }
  }
  if (vert) {
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i, ++r) {
        d(r, wrap(i + 1, rows) + j * rows) += 1.0;
        d(r, i + j * rows) -= 1.0;
      }
    }
  }
  return d;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("lattice stacking is column-wise and bijective") {
  const Lattice lat(3, 4);
  std::set<Index> seen;
  for (Index j = 0; j < 4; ++j) {
    for (Index i = 0; i < 3; ++i) {
      const Index idx = lat.index(i, j);
      CHECK(idx == i + 3 * j);
      CHECK(lat.row_of(idx) == i);
      CHECK(lat.col_of(idx) == j);
      seen.insert(idx);
    }
  }
  CHECK(seen.size() == 12);
  CHECK_THROWS_AS(Lattice(0, 3), DomainError);
}

TEST_CASE("difference operator") {
  SUBCASE("constant image maps to zero") {
    const DiffOperator d = DiffOperator::periodic(Lattice(4, 5));
    CHECK(d.apply(Vector::Constant(20, 3.5)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("two by two hand example") {
    // Columns (0, 0) and (1, 1).
    Vector x(4);
    x << 0, 0, 1, 1;
    const Vector dx = DiffOperator::periodic(Lattice(2, 2)).apply(x);
    Vector expected(8);
    expected << 1, 1, -1, -1, 0, 0, 0, 0;
    CHECK(dx == expected);
  }
  SUBCASE("one-dimensional circulant") {
    const DiffOperator d = DiffOperator::periodic(Lattice(1, 6));
    CHECK(d.rows() == 6);
    CHECK_FALSE(d.has_two_blocks());
    const Matrix m = d.dense();
    for (Index r = 0; r < 6; ++r) {
      CHECK(m(r, r) == -1.0);
      CHECK(m(r, (r + 1) % 6) == 1.0);
      CHECK(m.row(r).cwiseAbs().sum() == 2.0);
    }
  }
  SUBCASE("matches the index-notation sums") {
    Rng rng(1);
    for (auto [k, n] : {std::pair<Index, Index>{3, 4}, {5, 5}, {2, 7}, {6, 1}}) {
      const Lattice lat(k, n);
      const DiffOperator d = DiffOperator::periodic(lat);
      const Matrix ref = dense_diff(k, n);
      CHECK(d.dense() == ref);
      const Vector x = fixtures::normal_vector(k * n, rng);
      CHECK((d.apply(x) - ref * x).cwiseAbs().maxCoeff() <= 1e-12);
      const Vector w = fixtures::normal_vector(d.rows(), rng);
      CHECK((d.apply_adjoint(w) - ref.transpose() * w).cwiseAbs().maxCoeff() <= 1e-12);
      // Every row: one +1 and one -1.
      for (Index r = 0; r < ref.rows(); ++r) {
        CHECK(ref.row(r).sum() == 0.0);
        CHECK(ref.row(r).cwiseAbs().sum() == 2.0);
      }
      // Weighted penalty sum_rows (Dx)^2 / (2 r) against the explicit sums.
      const Vector r = Vector::Constant(d.rows(), 0.8);
      double sum = 0.0;
      for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < k; ++i) {
          if (n > 1) sum += std::pow(x[lat.index(i, wrap(j + 1, n))] - x[lat.index(i, j)], 2) / 1.6;
          if (k > 1) sum += std::pow(x[lat.index(wrap(i + 1, k), j)] - x[lat.index(i, j)], 2) / 1.6;
        }
      }
      CHECK(d.apply(x).cwiseQuotient(r.cwiseSqrt()).squaredNorm() / 2.0 == doctest::Approx(sum));
    }
  }
  SUBCASE("nullspace is exactly the constants") {
    const Matrix m = DiffOperator::periodic(Lattice(4, 3)).dense();
    Eigen::FullPivLU<Matrix> lu(m);
    CHECK(lu.rank() == 11);
    const Matrix kernel = lu.kernel();
    CHECK(kernel.cols() == 1);
    CHECK((kernel.col(0).array() - kernel(0, 0)).abs().maxCoeff() <= 1e-12);
  }
  SUBCASE("identity operator") {
    const DiffOperator d = DiffOperator::identity(Lattice(2, 3));
    CHECK(d.dense() == Matrix::Identity(6, 6));
    CHECK_FALSE(d.constant_nullspace());
  }
}

TEST_CASE("gaussian kernel") {
  CHECK(gaussian_kernel(1).weights(0, 0) == 1.0);
  const Kernel k = gaussian_kernel(7);
  CHECK(k.is_normalised(1e-12));
  CHECK(k.weights.isApprox(k.weights.transpose(), 1e-15));
  CHECK(k.weights.isApprox(k.weights.colwise().reverse(), 1e-15));
  CHECK(k.weights.isApprox(k.weights.rowwise().reverse(), 1e-15));
  CHECK(default_kernel_sigma(7) == 1.75);
  CHECK(gaussian_kernel(3, 1e-3).weights(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_kernel(4), DomainError);
  CHECK_THROWS_AS(gaussian_kernel(0), DomainError);
  const Kernel k1 = gaussian_kernel_1d(5);
  CHECK(k1.rows() == 1);
  CHECK(k1.is_normalised());
}

TEST_CASE("blur operator") {
  Rng rng(2);
  SUBCASE("identity kernel leaves x unchanged") {
    const BlurOperator h(identity_kernel(), Lattice(3, 3));
    const Vector x = fixtures::normal_vector(9, rng);
    CHECK(h.apply(x) == x);
  }
  SUBCASE("constant images are preserved") {
    const BlurOperator h(gaussian_kernel(5), Lattice(6, 7));
    CHECK((h.apply(Vector::Constant(42, 0.3)).array() - 0.3).abs().maxCoeff() <= 1e-15);
  }
  SUBCASE("matches the dense oracle and its transpose") {
    for (auto [k, n] : {std::pair<Index, Index>{4, 4}, {5, 5}, {3, 2}, {1, 5}, {2, 3}}) {
      for (Index ks : {1, 3, 5}) {
        const Index kr = k > 1 ? ks : 1;
        const Kernel kern = fixtures::random_kernel(kr, ks, rng);
        const BlurOperator h(kern, Lattice(k, n));
        const Matrix ref = dense_blur(kern, k, n);
        INFO(k << "x" << n << " kernel " << kr << "x" << ks);
        CHECK((h.dense() - ref).cwiseAbs().maxCoeff() <= 1e-12);
        const Vector x = fixtures::normal_vector(k * n, rng);
        const Vector v = fixtures::normal_vector(k * n, rng);
        CHECK((h.apply_adjoint(v) - ref.transpose() * v).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(std::abs(h.apply(x).dot(v) - x.dot(h.apply_adjoint(v))) <= 1e-12);
        CHECK(h.gram_diagonal() == doctest::Approx((ref.transpose() * ref)(0, 0)).epsilon(1e-13));
        CHECK((h.gram_dense() - ref.transpose() * ref).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
  SUBCASE("symmetric kernels are self-adjoint") {
    const BlurOperator h(gaussian_kernel(3), Lattice(5, 4));
    const Vector u = fixtures::normal_vector(20, rng);
    const Vector v = fixtures::normal_vector(20, rng);
    CHECK(std::abs(h.apply(u).dot(v) - u.dot(h.apply(v))) <= 1e-12);
  }
  SUBCASE("kernel wider than the lattice aliases") {
    const Kernel kern = fixtures::random_kernel(7, 7, rng);
    const BlurOperator h(kern, Lattice(3, 4));
    CHECK((h.dense() - dense_blur(kern, 3, 4)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(BlurOperator(identity_kernel(), Lattice(2, 2)).apply(Vector::Zero(3)), DomainError);
}

TEST_CASE("weighted gram matvec") {
  Rng rng(3);
  const Lattice lat(4, 4);
  const Kernel kern = fixtures::random_kernel(3, 3, rng);
  const BlurOperator h(kern, lat);
  const DiffOperator d = DiffOperator::periodic(lat);
  const Matrix hd = dense_blur(kern, 4, 4);
  const Matrix dd = dense_diff(4, 4);
  Vector w(d.rows());
  for (Index r = 0; r < w.size(); ++r) w[r] = fixtures::uniform(rng, 0.1, 2.0);
  const double c = 0.7;
  const Matrix q = hd.transpose() * hd + c * dd.transpose() * w.asDiagonal() * dd;

  SUBCASE("zero ratio is the blur gram") {
    const Vector v = fixtures::normal_vector(16, rng);
    CHECK((weighted_gram_matvec(h, d, 0.0, w, v) - hd.transpose() * hd * v).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("constants") {
    const Vector v = Vector::Constant(16, 2.0);
    CHECK((weighted_gram_matvec(h, d, c, w, v) - v).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("matches dense assembly") {
    for (int t = 0; t < 5; ++t) {
      const Vector v = fixtures::normal_vector(16, rng);
      CHECK((weighted_gram_matvec(h, d, c, w, v) - q * v).cwiseAbs().maxCoeff() <= 1e-12);
    }
    CHECK((weighted_gram_diagonal(h, d, c, w) - q.diagonal()).cwiseAbs().maxCoeff() <= 1e-12);
    Matrix assembled = h.gram_dense();
    add_weighted_diff_gram(assembled, d, c, w);
    CHECK((assembled - q).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("positive definite on random instances") {
    for (int t = 0; t < 100; ++t) {
      const Vector v = fixtures::normal_vector(16, rng);
      CHECK(v.dot(weighted_gram_matvec(h, d, c, w, v)) > 0.0);
    }
  }
  SUBCASE("rejects bad weights") {
    Vector bad = w;
    bad[3] = std::nan("");
    CHECK_THROWS_AS(weighted_gram_matvec(h, d, c, bad, Vector::Ones(16)), NonfiniteError);
    bad[3] = -1.0;
    CHECK_THROWS_AS(weighted_gram_matvec(h, d, c, bad, Vector::Ones(16)), DomainError);
    CHECK_THROWS_AS(weighted_gram_matvec(h, d, c, Vector::Ones(5), Vector::Ones(16)), DomainError);
  }
}

TEST_CASE("rank condition") {
  const Lattice lat(5, 5);
  const DiffOperator d = DiffOperator::periodic(lat);
  CHECK(validate_rank_condition(BlurOperator(gaussian_kernel(3), lat), d));
  CHECK_FALSE(validate_rank_condition(BlurOperator(Kernel{Matrix::Zero(3, 3)}, lat), d));
  Matrix laplacian(3, 3);
  laplacian << 0, 1, 0, 1, -4, 1, 0, 1, 0;
  CHECK_FALSE(validate_rank_condition(BlurOperator(Kernel{laplacian}, lat), d));
  // D = I has a trivial nullspace.
  CHECK(validate_rank_condition(BlurOperator(Kernel{laplacian}, lat), DiffOperator::identity(lat)));
}

TEST_CASE("dense capacity gate") {
  CHECK_NOTHROW(require_dense_capacity(kDenseCapacity, "test"));
  CHECK_THROWS_AS(require_dense_capacity(kDenseCapacity + 1, "test"), CapacityError);
  CHECK_THROWS_AS(BlurOperator(identity_kernel(), Lattice(65, 65)).dense(), CapacityError);
}

}  // TEST_SUITE
