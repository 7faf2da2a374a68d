#pragma once

#include "tvbayes/operators.hpp"
#include "tvbayes/solvers.hpp"

namespace tvbayes {

/// Minimiser of ||y - Hx||^2 + delta ||Dx||^2, i.e. the solution of
/// (H^T H + delta D^T D) x = H^T y.
PcgResult tikhonov_solve(const Vector& y, const BlurOperator& h, const DiffOperator& d,
                         double delta, const PcgOptions& opts = {});

}  // namespace tvbayes
