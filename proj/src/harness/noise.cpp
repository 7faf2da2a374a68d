#include "tvbayes/harness/noise.hpp"

#include <cmath>
#include <random>

#include "tvbayes/errors.hpp"

namespace tvbayes {

double sample_variance(const Vector& v) {
  if (v.size() < 2) throw DomainError("sample_variance: need at least two values");
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

NoisyData add_noise_bsnr(const Vector& blurred, double bsnr, Rng& rng) {
  if (std::isnan(bsnr)) throw DomainError("add_noise_bsnr: BSNR is NaN");
  const double var = sample_variance(blurred);
  if (!(var > 0.0)) throw DomainError("add_noise_bsnr: blurred signal is constant");
  if (std::isinf(bsnr) && bsnr > 0.0) return {blurred, 0.0};
  const double sigma = std::sqrt(var / std::pow(10.0, bsnr / 10.0));
  std::normal_distribution<double> normal(0.0, sigma);
  NoisyData out{blurred, sigma};
  for (Index i = 0; i < out.y.size(); ++i) out.y[i] += normal(rng);
  return out;
}

double bsnr_db(const Vector& blurred, double sigma) {
  return 10.0 * std::log10(sample_variance(blurred) / (sigma * sigma));
}

}  // namespace tvbayes
