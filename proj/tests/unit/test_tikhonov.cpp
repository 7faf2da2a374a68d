#include <doctest.h>

#include "fixtures.hpp"
#include "tvbayes/errors.hpp"
#include "tvbayes/tikhonov.hpp"

using namespace tvbayes;

TEST_SUITE("tikhonov") {

TEST_CASE("dense normal equations") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const Lattice lat(5, 7);
    const BlurOperator h(fixtures::random_kernel(3, 3, rng), lat);
    const DiffOperator d = DiffOperator::periodic(lat);
    const Vector y = fixtures::normal_vector(lat.size(), rng);
    for (double delta : {1e-3, 0.1, 10.0}) {
      PcgOptions opts;
      opts.tol = 1e-12;
      const Vector x = tikhonov_solve(y, h, d, delta, opts).x;
      const Matrix hd = h.dense();
      const Matrix dd = d.dense();
      const Matrix a = hd.transpose() * hd + delta * dd.transpose() * dd;
      const Vector ref = a.llt().solve(hd.transpose() * y);
      CHECK((x - ref).norm() <= 1e-8 * ref.norm());
    }
  }
}

TEST_CASE("limits in delta") {
  Rng rng(22);
  const Lattice lat(1, 30);
  const BlurOperator h(identity_kernel(), lat);
  const DiffOperator d = DiffOperator::periodic(lat);
  const Vector y = fixtures::normal_vector(30, rng);
  PcgOptions opts;
  opts.tol = 1e-9;
  opts.maxit = 100000;
  CHECK((tikhonov_solve(y, h, d, 1e-8, opts).x - y).norm() <= 1e-6 * y.norm());
  // Non-constant modes shrink by 1 / (1 + delta mu) with mu >= 2 - 2 cos(2 pi / 30).
  const Vector flat = tikhonov_solve(y, h, d, 1e6, opts).x;
  CHECK((flat.array() - y.mean()).matrix().norm() <= 1e-4 * y.norm());
}

TEST_CASE("bad delta") {
  const Lattice lat(2, 2);
  const BlurOperator h(identity_kernel(), lat);
  const DiffOperator d = DiffOperator::periodic(lat);
  for (double delta : {0.0, -1.0, std::numeric_limits<double>::infinity()}) {
    CHECK_THROWS_AS(tikhonov_solve(Vector::Ones(4), h, d, delta), DomainError);
  }
}

}  // TEST_SUITE
