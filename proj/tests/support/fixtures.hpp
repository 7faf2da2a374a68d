#pragma once

// Random small problems shared by the unit and acceptance tests.

#include <random>
#include <vector>

#include "tvbayes/model.hpp"
#include "tvbayes/operators.hpp"

namespace fixtures {

using tvbayes::Index;
using tvbayes::Matrix;
using tvbayes::Rng;
using tvbayes::Vector;

inline Vector normal_vector(Index n, Rng& rng, double sd = 1.0) {
  std::normal_distribution<double> z(0.0, sd);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = z(rng);
  return v;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Positive, normalised, generally asymmetric kernel with the given odd
/// extents.
inline tvbayes::Kernel random_kernel(Index rows, Index cols, Rng& rng) {
  tvbayes::Kernel k{Matrix(rows, cols)};
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) k.weights(i, j) = uniform(rng, 0.05, 1.0);
  }
  k.weights /= k.weights.sum();
  return k;
}

/// 0 safeguarded Laplace, 1 Student (w = 2), 2 two-dimensional Laplace,
/// 3 a generic GIG mixing with a, b > 0.
inline tvbayes::PriorVariant prior_variant(int which) {
  using tvbayes::GigParams;
  using tvbayes::PriorVariant;
  switch (which) {
    case 0: return PriorVariant::laplace_tv();
    case 1: return PriorVariant::student_tv(2.0);
    case 2: return PriorVariant::laplace_2d();
    default: return PriorVariant::custom_gig(GigParams(1.5, 0.2, 0.7));
  }
}

inline const char* prior_label(int which) {
  switch (which) {
    case 0: return "laplace";
    case 1: return "student";
    case 2: return "laplace2d";
    default: return "gig";
  }
}

/// Random k x n model with a 3 x 3 (or 1 x 3) kernel.
inline tvbayes::ModelSpec random_model(Index k, Index n, int prior, Rng& rng,
                                       tvbayes::HyperParams hyper = {}) {
  const tvbayes::Lattice lattice(k, n);
  const Index kr = k > 1 ? 3 : 1;
  tvbayes::BlurOperator h(random_kernel(kr, 3, rng), lattice);
  return tvbayes::ModelSpec(std::move(h), tvbayes::DiffOperator::periodic(lattice), hyper,
                            prior_variant(prior));
}

inline tvbayes::LatentState random_state(const tvbayes::ModelSpec& model, Rng& rng) {
  tvbayes::LatentState s;
  s.x = normal_vector(model.n_pixels(), rng);
  s.nu = uniform(rng, 0.5, 20.0);
  s.lambda = uniform(rng, 0.5, 20.0);
  s.r = Vector(model.n_latents());
  for (Index l = 0; l < s.r.size(); ++l) s.r[l] = uniform(rng, 0.1, 3.0);
  return s;
}

/// y = H x_true + noise for a piecewise-constant x_true.
inline Vector blocky_data(const tvbayes::ModelSpec& model, Rng& rng, double noise_sd) {
  const Index n = model.n_pixels();
  Vector x(n);
  double level = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (i % 5 == 0) level = uniform(rng, 0.0, 1.0);
    x[i] = level;
  }
  return model.blur().apply(x) + normal_vector(n, rng, noise_sd);
}

/// y = H x_true + noise for a background plus two random rectangles, so the
/// truth is piecewise constant in both directions.
inline Vector rectangle_data(const tvbayes::ModelSpec& model, Rng& rng, double noise_sd) {
  const tvbayes::Lattice& lat = model.lattice();
  Vector x = Vector::Constant(lat.size(), uniform(rng, 0.0, 0.3));
  for (int k = 0; k < 2; ++k) {
    const Index r0 = static_cast<Index>(rng() % lat.rows());
    const Index c0 = static_cast<Index>(rng() % lat.cols());
    const Index r1 = r0 + 1 + static_cast<Index>(rng() % (lat.rows() - r0));
    const Index c1 = c0 + 1 + static_cast<Index>(rng() % (lat.cols() - c0));
    const double level = uniform(rng, 0.4, 1.0);
    for (Index j = c0; j < c1; ++j) {
      for (Index i = r0; i < r1; ++i) x[lat.index(i, j)] = level;
    }
  }
  return model.blur().apply(x) + normal_vector(lat.size(), rng, noise_sd);
}

}  // namespace fixtures

namespace fixtures {

struct Triple {
  double a, b, p;
};

/// Twenty admissible triples: nine with p > 0 (gamma limits included), four
/// with p = 0 and seven with p < 0 (inverse gamma limits included).
inline std::vector<Triple> admissible_grid() {
  return {{2, 0, 1},     {3, 0, 0.2},   {0.5, 0, 4.5}, {2, 3, 0.5},     {1e-3, 1e-3, 1},
          {0.5, 40, 4},  {10, 0.1, 2.5}, {1, 1, 1},    {4, 2, 12},      {1, 1, 0},
          {0.01, 5, 0},  {30, 0.2, 0},  {2, 2, 0},     {0, 2, -1.5},    {0, 5, -0.3},
          {0, 1, -6},    {50, 0.02, -3}, {1, 1, -0.5}, {0.2, 8, -2},    {3, 3, -10}};
}

/// Whether E[x^q] is finite.
inline bool moment_exists(const Triple& t, double q) {
  if (t.b == 0.0) return t.p + q > 0.0;
  if (t.a == 0.0) return t.p + q < 0.0;
  return true;
}

}  // namespace fixtures
