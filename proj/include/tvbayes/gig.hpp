#pragma once

#include <iosfwd>
#include <string>

#include "tvbayes/types.hpp"

namespace tvbayes {

/// Parameters of the generalized inverse Gaussian density
///
///   f(x) = (a/b)^{p/2} / (2 K_p(sqrt(ab))) x^{p-1} exp(-(a x + b/x) / 2),  x > 0.
///
/// Construction enforces the admissible region
///   (a > 0, b >= 0, p > 0) or (a > 0, b > 0, p = 0) or (a >= 0, b > 0, p < 0).
/// b = 0 is a gamma law and a = 0 an inverse gamma law.
class GigParams {
 public:
  GigParams(double a, double b, double p);

  /// Gamma with shape alpha and rate beta: GIG(2 beta, 0, alpha).
  static GigParams gamma(double shape, double rate);
  /// Inverse gamma with shape alpha and scale beta: GIG(0, 2 beta, -alpha).
  static GigParams inverse_gamma(double shape, double scale);
  /// Exponential with rate theta: Gamma(1, theta).
  static GigParams exponential(double rate);
  /// Reciprocal inverse Gaussian: GIG(alpha^2 / beta, beta, 1/2).
  static GigParams rig(double alpha, double beta);

  static bool admissible(double a, double b, double p);

  double a() const { return a_; }
  double b() const { return b_; }
  double p() const { return p_; }

  bool operator==(const GigParams&) const = default;

 private:
  double a_;
  double b_;
  double p_;
};

std::ostream& operator<<(std::ostream& os, const GigParams& g);

enum class GigKind { Exponential, Gamma, InverseGamma, Rig, Generic };

/// A GIG triple re-expressed in the parameterisation of its named special
/// case. `first`/`second` are (theta, -), (alpha, beta), (alpha, beta),
/// (alpha, beta) or unused for Generic.
struct SpecialCase {
  GigKind kind;
  double first = 0.0;
  double second = 0.0;
};

SpecialCase classify(const GigParams& g);
std::string to_string(GigKind kind);

/// Log density of the named special case evaluated from its own closed
/// form, independent of the Bessel normaliser.
double special_case_log_pdf(const SpecialCase& sc, double x);

double gig_log_pdf(const GigParams& g, double x);

/// E[x^q]. Throws MomentDivergesError when the moment does not exist
/// (possible only in the gamma and inverse gamma limits).
double gig_moment(const GigParams& g, double q);
double gig_mean(const GigParams& g);
double gig_mode(const GigParams& g);
double gig_variance(const GigParams& g);

/// One draw. Devroye's (2014) rejection sampler for a, b > 0; the gamma and
/// inverse gamma limits use gamma variates.
double gig_sample(const GigParams& g, Rng& rng);

/// Gamma(shape, rate) variate.
double gamma_sample(double shape, double rate, Rng& rng);

}  // namespace tvbayes
