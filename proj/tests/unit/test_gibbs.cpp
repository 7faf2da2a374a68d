#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tvbayes/errors.hpp"
#include "tvbayes/gibbs.hpp"

using namespace tvbayes;

namespace {

// Small problems need a proper lambda prior; under 1/lambda the chain can
// escape towards lambda -> inf.
const HyperParams kProper{1.0, 0.01, 0.0, 0.0};

}  // namespace

TEST_SUITE("gibbs") {

TEST_CASE("same seed, same chain") {
  Rng rng(31);
  const ModelSpec m = fixtures::random_model(4, 4, 0, rng, kProper);
  const Vector y = fixtures::blocky_data(m, rng, 0.05);
  GibbsOptions opts;
  opts.samples = 50;
  opts.seed = 9;
  const GibbsChain a = gibbs_run(y, m, opts);
  const GibbsChain b = gibbs_run(y, m, opts);
  CHECK(a.mean == b.mean);
  CHECK(a.nu_trace == b.nu_trace);
  opts.seed = 10;
  CHECK_FALSE(gibbs_run(y, m, opts).nu_trace == a.nu_trace);
  CHECK(a.burn_in == default_burn_in(50));
  CHECK(default_burn_in(10000) == 2000);
}

TEST_CASE("running moments match a two-pass replay") {
  Rng rng(32);
  const ModelSpec m = fixtures::random_model(3, 4, 1, rng, kProper);
  const Vector y = fixtures::blocky_data(m, rng, 0.05);
  GibbsOptions opts;
  opts.samples = 200;
  opts.burn_in = 7;
  opts.thinning = 3;
  opts.seed = 5;
  const GibbsChain chain = gibbs_run(y, m, opts);

  GibbsSampler s(y, m, opts.seed);
  for (int i = 0; i < opts.burn_in; ++i) s.sweep();
  std::vector<Vector> xs;
  for (int k = 0; k < opts.samples; ++k) {
    for (int t = 0; t < opts.thinning; ++t) s.sweep();
    xs.push_back(s.state().x);
    CHECK(chain.nu_trace[k] == s.state().nu);
  }
  Vector mean = Vector::Zero(y.size());
  for (const Vector& x : xs) mean += x;
  mean /= opts.samples;
  Vector var = Vector::Zero(y.size());
  for (const Vector& x : xs) var += (x - mean).array().square().matrix();
  var /= opts.samples - 1;
  CHECK((chain.mean - mean).norm() <= 1e-12 * mean.norm());
  CHECK((chain.variance - var).norm() <= 1e-10 * var.norm());
  CHECK(chain.last.x == s.state().x);
}

TEST_CASE("frozen conditional draws") {
  Rng rng(33);
  const ModelSpec m = fixtures::random_model(3, 3, 0, rng);
  const Vector y = fixtures::blocky_data(m, rng, 0.1);
  GibbsSampler s(y, m, 3, fixtures::random_state(m, rng));
  const GigParams nu = nu_conditional(s.state(), y, m);
  const GigParams lam = lambda_conditional(s.state(), m);
  const GigParams r0 = r_conditional(s.state(), m, 0);
  const int n = 40000;
  double snu = 0.0, slam = 0.0, sr = 0.0;
  for (int i = 0; i < n; ++i) {
    snu += s.sample_nu();
    slam += s.sample_lambda();
    sr += s.sample_latent(0);
  }
  auto within = [&](double sum, const GigParams& g) {
    const double se = std::sqrt(gig_variance(g) / n);
    return std::abs(sum / n - gig_mean(g)) <= 4.0 * se;
  };
  CHECK(within(snu, nu));
  CHECK(within(slam, lam));
  CHECK(within(sr, r0));
}

TEST_CASE("weak penalty recovers the data") {
  const Lattice lat(1, 6);
  const ModelSpec m(BlurOperator(identity_kernel(), lat), DiffOperator::periodic(lat),
                    {0.0, 1e8, 1e8, 1e-8}, PriorVariant::laplace_tv());
  Rng rng(34);
  const Vector y = fixtures::normal_vector(6, rng);
  GibbsOptions opts;
  opts.samples = 2000;
  const GibbsChain c = gibbs_run(y, m, opts);
  // nu ~ 1e16 and lambda tiny: x | rest collapses onto y.
  CHECK((c.mean - y).norm() <= 1e-3 * y.norm());
}

TEST_CASE("lambda chain is stationary after burn-in") {
  Rng rng(35);
  const ModelSpec m = fixtures::random_model(1, 24, 0, rng);
  const Vector y = fixtures::blocky_data(m, rng, 0.05);
  GibbsOptions opts;
  opts.samples = 8000;
  const GibbsChain c = gibbs_run(y, m, opts);
  // Compare halves using batch means for the standard error.
  auto batch_stats = [&](int from, int to) {
    const int batches = 20;
    const int len = (to - from) / batches;
    std::vector<double> means;
    for (int b = 0; b < batches; ++b) {
      double s = 0.0;
      for (int i = 0; i < len; ++i) s += c.lambda_trace[from + b * len + i];
      means.push_back(s / len);
    }
    double mu = 0.0;
    for (double v : means) mu += v;
    mu /= batches;
    double var = 0.0;
    for (double v : means) var += (v - mu) * (v - mu);
    return std::pair{mu, var / (batches - 1) / batches};
  };
  const auto [m1, v1] = batch_stats(0, 4000);
  const auto [m2, v2] = batch_stats(4000, 8000);
  CHECK(std::abs(m1 - m2) <= 4.0 * std::sqrt(v1 + v2));
  CHECK(c.lambda_mean() > 0.0);
}

TEST_CASE("errors") {
  const Lattice big(65, 65);
  const ModelSpec m(BlurOperator(gaussian_kernel(3), big), DiffOperator::periodic(big), {},
                    PriorVariant::laplace_tv());
  const Vector y = Vector::LinSpaced(big.size(), 0.0, 1.0);
  CHECK_THROWS_AS(GibbsSampler(y, m, 1), CapacityError);
  Rng rng(36);
  const ModelSpec small = fixtures::random_model(2, 2, 0, rng);
  GibbsOptions bad;
  bad.samples = 0;
  CHECK_THROWS_AS(gibbs_run(Vector::LinSpaced(4, 0, 1), small, bad), DomainError);
  bad = {};
  bad.thinning = 0;
  CHECK_THROWS_AS(gibbs_run(Vector::LinSpaced(4, 0, 1), small, bad), DomainError);
}

}  // TEST_SUITE
