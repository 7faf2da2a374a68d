#pragma once

namespace tvbayes {

/// Logarithm of the exponentially scaled modified Bessel function of the
/// second kind, log(e^x K_nu(x)). Defined for x > 0 and any real nu.
double log_bessel_k_scaled(double nu, double x);

/// log K_nu(x). Stays finite where K_nu(x) under- or overflows.
double log_bessel_k(double nu, double x);

/// K_nu(x) in the linear domain. Throws RangeError when the value
/// overflows a double; underflow returns the (possibly subnormal) result.
double bessel_k(double nu, double x);

/// K_{nu+q}(x) / K_nu(x), evaluated in the log domain.
double bessel_k_ratio(double nu, double q, double x);

}  // namespace tvbayes
