#include "tvbayes/gig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "tvbayes/bessel.hpp"
#include "tvbayes/errors.hpp"

namespace tvbayes {
namespace {

std::string describe(double a, double b, double p) {
  std::ostringstream os;
  os << "GIG(a=" << a << ", b=" << b << ", p=" << p << ")";
  return os.str();
}

double require_finite(double v, const GigParams& g, const char* what) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << what << " of " << g << " is not finite";
    throw NonfiniteError(os.str());
  }
  return v;
}

double uniform_open(Rng& rng) {
  double u;
  do {
    u = std::generate_canonical<double, 53>(rng);
  } while (u <= 0.0);
  return u;
}

// Devroye, "Random variate generation for the generalized inverse Gaussian
// distribution", Statistics and Computing 24 (2014). Samples the standard
// form x^{lambda-1} exp(-omega (x + 1/x) / 2) with lambda >= 0, omega > 0.
double devroye_standard(double lambda, double omega, Rng& rng) {
  const double alpha = std::sqrt(omega * omega + lambda * lambda) - lambda;
  const auto psi = [&](double x) {
    return -alpha * (std::cosh(x) - 1.0) - lambda * (std::expm1(x) - x);
  };
  const auto dpsi = [&](double x) { return -alpha * std::sinh(x) - lambda * std::expm1(x); };

  double t = 1.0;
  const double right = -psi(1.0);
  if (right > 2.0) {
    t = std::sqrt(2.0 / (alpha + lambda));
  } else if (right < 0.5) {
    t = std::log(4.0 / (alpha + 2.0 * lambda));
  }
  double s = 1.0;
  const double left = -psi(-1.0);
  if (left > 2.0) {
    s = std::sqrt(4.0 / (alpha * std::cosh(1.0) + lambda));
  } else if (left < 0.5) {
    const double inv_alpha = 1.0 / alpha;
    s = std::log1p(inv_alpha + std::sqrt(inv_alpha * inv_alpha + 2.0 * inv_alpha));
    if (lambda > 0.0) s = std::min(s, 1.0 / lambda);
  }

  const double eta = -psi(t);
  const double zeta = -dpsi(t);
  const double theta = -psi(-s);
  const double xi = dpsi(-s);
  const double p = 1.0 / xi;
  const double r = 1.0 / zeta;
  const double t_edge = t - r * eta;
  const double s_edge = s - p * theta;
  const double q = t_edge + s_edge;
  const double total = p + q + r;

  double x;
  for (;;) {
    const double u = uniform_open(rng);
    const double v = uniform_open(rng);
    const double w = uniform_open(rng);
    if (u < q / total) {
      x = -s_edge + q * v;
    } else if (u < (q + r) / total) {
      x = t_edge - r * std::log(v);
    } else {
      x = -s_edge + p * std::log(v);
    }
    double hat;
    if (x >= -s_edge && x <= t_edge) {
      hat = 1.0;
    } else if (x > t_edge) {
      hat = std::exp(-eta - zeta * (x - t));
    } else {
      hat = std::exp(-theta + xi * (x + s));
    }
    if (w * hat <= std::exp(psi(x))) break;
  }
  const double ratio = lambda / omega;
  return (ratio + std::sqrt(1.0 + ratio * ratio)) * std::exp(x);
}

}  // namespace

GigParams::GigParams(double a, double b, double p) : a_(a), b_(b), p_(p) {
  if (!admissible(a, b, p)) {
    throw DomainError(describe(a, b, p) + " is outside the admissible parameter region");
  }
}

bool GigParams::admissible(double a, double b, double p) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(p)) return false;
  if (p > 0.0) return a > 0.0 && b >= 0.0;
  if (p == 0.0) return a > 0.0 && b > 0.0;
  return a >= 0.0 && b > 0.0;
}

GigParams GigParams::gamma(double shape, double rate) { return {2.0 * rate, 0.0, shape}; }
GigParams GigParams::inverse_gamma(double shape, double scale) {
  return {0.0, 2.0 * scale, -shape};
}
GigParams GigParams::exponential(double rate) { return gamma(1.0, rate); }
GigParams GigParams::rig(double alpha, double beta) {
  return {alpha * alpha / beta, beta, 0.5};
}

std::ostream& operator<<(std::ostream& os, const GigParams& g) {
  return os << describe(g.a(), g.b(), g.p());
}

SpecialCase classify(const GigParams& g) {
  if (g.b() == 0.0) {
    if (g.p() == 1.0) return {GigKind::Exponential, g.a() / 2.0, 0.0};
    return {GigKind::Gamma, g.p(), g.a() / 2.0};
  }
  if (g.a() == 0.0) return {GigKind::InverseGamma, -g.p(), g.b() / 2.0};
  if (g.p() == 0.5) return {GigKind::Rig, std::sqrt(g.a() * g.b()), g.b()};
  return {GigKind::Generic};
}

std::string to_string(GigKind kind) {
  switch (kind) {
    case GigKind::Exponential: return "Exp";
    case GigKind::Gamma: return "Gamma";
    case GigKind::InverseGamma: return "InvGamma";
    case GigKind::Rig: return "RIG";
    case GigKind::Generic: return "GIG";
  }
  return "GIG";
}

double special_case_log_pdf(const SpecialCase& sc, double x) {
  if (!(x > 0.0)) throw DomainError("special_case_log_pdf: x must be positive");
  const double a = sc.first;
  const double b = sc.second;
  switch (sc.kind) {
    case GigKind::Exponential:
      return std::log(a) - a * x;
    case GigKind::Gamma:
      return a * std::log(b) - std::lgamma(a) + (a - 1.0) * std::log(x) - b * x;
    case GigKind::InverseGamma:
      return a * std::log(b) - std::lgamma(a) - (a + 1.0) * std::log(x) - b / x;
    case GigKind::Rig: {
      const double s = a * x + b;
      return std::log(a) - 0.5 * std::log(2.0 * std::numbers::pi * b) + 2.0 * a -
             0.5 * std::log(x) - s * s / (2.0 * b * x);
    }
    case GigKind::Generic:
      break;
  }
  throw DomainError("special_case_log_pdf: no closed form for a generic GIG");
}

double gig_log_pdf(const GigParams& g, double x) {
  if (!(x > 0.0)) throw DomainError("gig_log_pdf: x must be positive");
  const double a = g.a();
  const double b = g.b();
  const double p = g.p();
  double log_norm;
  if (b == 0.0) {
    // Gamma(p, a/2)
    log_norm = p * std::log(a / 2.0) - std::lgamma(p);
  } else if (a == 0.0) {
    // InvGamma(-p, b/2)
    log_norm = -p * std::log(b / 2.0) - std::lgamma(-p);
  } else {
    log_norm = 0.5 * p * (std::log(a) - std::log(b)) - std::log(2.0) -
               log_bessel_k(p, std::sqrt(a * b));
  }
  return log_norm + (p - 1.0) * std::log(x) - 0.5 * (a * x + b / x);
}

double gig_moment(const GigParams& g, double q) {
  if (q == 0.0) return 1.0;
  const double a = g.a();
  const double b = g.b();
  const double p = g.p();
  double value;
  if (b == 0.0) {
    if (!(p + q > 0.0)) {
      std::ostringstream os;
      os << "moment diverges: E[x^" << q << "] of " << g;
      throw MomentDivergesError(os.str());
    }
    value = std::exp(std::lgamma(p + q) - std::lgamma(p) + q * std::log(2.0 / a));
  } else if (a == 0.0) {
    const double shape = -p;
    if (!(shape - q > 0.0)) {
      std::ostringstream os;
      os << "moment diverges: E[x^" << q << "] of " << g;
      throw MomentDivergesError(os.str());
    }
    value = std::exp(std::lgamma(shape - q) - std::lgamma(shape) + q * std::log(b / 2.0));
  } else {
    const double omega = std::sqrt(a * b);
    value = std::exp(0.5 * q * (std::log(b) - std::log(a))) * bessel_k_ratio(p, q, omega);
  }
  return require_finite(value, g, "moment");
}

double gig_mean(const GigParams& g) { return gig_moment(g, 1.0); }

double gig_mode(const GigParams& g) {
  const double a = g.a();
  const double b = g.b();
  const double pm1 = g.p() - 1.0;
  if (a == 0.0) return b / (2.0 * (1.0 - g.p()));
  const double root = std::sqrt(pm1 * pm1 + a * b);
  // Rationalised form avoids cancellation when p < 1.
  if (pm1 < 0.0) return b / (root - pm1);
  return (pm1 + root) / a;
}

double gig_variance(const GigParams& g) {
  const double a = g.a();
  const double b = g.b();
  const double p = g.p();
  double value;
  if (b == 0.0) {
    value = 4.0 * p / (a * a);
  } else if (a == 0.0) {
    const double shape = -p;
    if (!(shape > 2.0)) {
      std::ostringstream os;
      os << "variance diverges for " << g;
      throw MomentDivergesError(os.str());
    }
    const double scale = b / 2.0;
    value = scale * scale / ((shape - 1.0) * (shape - 1.0) * (shape - 2.0));
  } else {
    const double omega = std::sqrt(a * b);
    const double r1 = bessel_k_ratio(p, 1.0, omega);
    // K_{p+2} = K_p + (2(p+1)/omega) K_{p+1}
    const double r2 = 1.0 + 2.0 * (p + 1.0) / omega * r1;
    value = (b / a) * (r2 - r1 * r1);
  }
  return require_finite(value, g, "variance");
}

double gamma_sample(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw DomainError("gamma_sample: shape and rate must be positive and finite");
  }
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  double x;
  do {
    x = dist(rng);
  } while (x <= 0.0);
  return x;
}

double gig_sample(const GigParams& g, Rng& rng) {
  const double a = g.a();
  const double b = g.b();
  const double p = g.p();
  if (b == 0.0) return gamma_sample(p, a / 2.0, rng);
  if (a == 0.0) return (b / 2.0) / gamma_sample(-p, 1.0, rng);
  const double omega = std::sqrt(a * b);
  const double scale = std::sqrt(b / a);
  const double y = devroye_standard(std::abs(p), omega, rng);
  return p >= 0.0 ? scale * y : scale / y;
}

}  // namespace tvbayes
