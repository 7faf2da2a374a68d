#pragma once

#include "tvbayes/types.hpp"

namespace tvbayes {

struct NoisyData {
  Vector y;
  double sigma;
};

/// White Gaussian noise with sigma^2 = Var(blurred) / 10^(bsnr_db / 10),
/// Var the unbiased sample variance. bsnr_db = +inf adds no noise.
NoisyData add_noise_bsnr(const Vector& blurred, double bsnr_db, Rng& rng);

/// 10 log10(Var(blurred) / sigma^2).
double bsnr_db(const Vector& blurred, double sigma);

double sample_variance(const Vector& v);

}  // namespace tvbayes
