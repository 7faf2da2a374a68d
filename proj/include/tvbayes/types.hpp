#pragma once

#include <Eigen/Core>
#include <random>

namespace tvbayes {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Random stream used by every sampler. One stream per thread.
using Rng = std::mt19937_64;

/// Largest system for which dense matrices are formed (VB covariances,
/// Gibbs x-draws, dense operator assembly).
inline constexpr Index kDenseCapacity = 4096;

}  // namespace tvbayes
