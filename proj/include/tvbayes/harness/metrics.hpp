#pragma once

#include "tvbayes/types.hpp"

namespace tvbayes {

struct Metrics {
  double rel_l2;
  /// +infinity for an exact reconstruction.
  double psnr;
};

/// rel_l2 = ||x_hat - x|| / ||x||, psnr = 10 log10(max(x)^2 N / ||x_hat - x||^2).
Metrics compute_metrics(const Vector& x_hat, const Vector& x_true);

}  // namespace tvbayes
