#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tvbayes/bessel.hpp"
#include "tvbayes/errors.hpp"
#include "tvbayes/gibbs.hpp"
#include "tvbayes/gig.hpp"
#include "tvbayes/harness/metrics.hpp"
#include "tvbayes/harness/noise.hpp"
#include "tvbayes/harness/signals.hpp"
#include "tvbayes/ias.hpp"
#include "tvbayes/operators.hpp"
#include "tvbayes/tikhonov.hpp"
#include "tvbayes/vb.hpp"

namespace py = pybind11;
using namespace tvbayes;

namespace {

Kernel kernel_for(const Lattice& lattice, int size, double sigma) {
  return lattice.rows() == 1 ? gaussian_kernel_1d(size, sigma) : gaussian_kernel(size, sigma);
}

PriorVariant prior_from(const std::string& name, double safeguard_b, double dof,
                        std::tuple<double, double, double> gig) {
  const auto [a, b, p] = gig;
  if (name == "laplace") return PriorVariant::laplace_tv(safeguard_b);
  if (name == "student") return PriorVariant::student_tv(dof);
  if (name == "laplace2d") return PriorVariant::laplace_2d(GigParams(a, b, p));
  if (name == "gig") return PriorVariant::custom_gig(GigParams(a, b, p));
  throw DomainError("unknown prior '" + name + "'");
}

// y is stacked column by column on a rows x cols lattice.
py::dict deblur(const Vector& y, Index rows, Index cols, const std::string& method,
                const std::string& prior, int kernel_size, double sigma, double safeguard_b,
                double dof, std::tuple<double, double, double> gig, const HyperParams& hyper,
                double tol, int maxit, int samples, int burn_in, std::uint64_t seed, double delta) {
  const Lattice lattice(rows, cols);
  if (y.size() != lattice.size()) throw DomainError("deblur: y does not match rows * cols");
  BlurOperator h(kernel_for(lattice, kernel_size, sigma), lattice);
  DiffOperator d = DiffOperator::periodic(lattice);
  py::dict out;
  if (method == "tikhonov") {
    const PcgResult r = tikhonov_solve(y, h, d, delta);
    out["x"] = r.x;
    out["iterations"] = r.iterations;
    return out;
  }
  const ModelSpec model(std::move(h), std::move(d), hyper, prior_from(prior, safeguard_b, dof, gig));
  if (method == "ias") {
    IasOptions opts;
    opts.tol = tol;
    opts.maxit = maxit;
    const IasState s = ias_run(y, model, opts);
    out["x"] = s.state.x;
    out["nu"] = s.state.nu;
    out["lambda"] = s.state.lambda;
    out["r"] = s.state.r;
    out["iterations"] = s.iterations;
    out["converged"] = s.converged;
  } else if (method == "vb") {
    VbOptions opts;
    opts.tol = tol;
    opts.maxit = maxit;
    const VbState s = vb_run(y, model, opts);
    out["x"] = s.mean;
    out["sd"] = s.marginal_sd();
    out["nu"] = s.nu_mean();
    out["lambda"] = s.lambda_mean();
    out["nu_factor"] = py::make_tuple(s.nu_shape, s.nu_rate);
    out["lambda_factor"] = py::make_tuple(s.lambda_shape, s.lambda_rate);
    out["iterations"] = s.iterations;
    out["converged"] = s.converged;
  } else if (method == "gibbs") {
    GibbsOptions opts;
    opts.seed = seed;
    opts.samples = samples;
    opts.burn_in = burn_in;
    const GibbsChain c = gibbs_run(y, model, opts);
    out["x"] = c.mean;
    out["sd"] = c.sd();
    out["nu"] = c.nu_mean();
    out["lambda"] = c.lambda_mean();
    out["nu_trace"] = c.nu_trace;
    out["lambda_trace"] = c.lambda_trace;
    out["iterations"] = c.samples;
  } else {
    throw DomainError("unknown method '" + method + "'");
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hierarchical Bayesian total-variation deblurring";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<MomentDivergesError>(m, "MomentDivergesError", PyExc_ArithmeticError);
  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
  py::register_exception<DegeneracyError>(m, "DegeneracyError", PyExc_ArithmeticError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);

  py::class_<GigParams>(m, "GigParams")
      .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("p"))
      .def_property_readonly("a", &GigParams::a)
      .def_property_readonly("b", &GigParams::b)
      .def_property_readonly("p", &GigParams::p)
      .def_static("gamma", &GigParams::gamma, py::arg("shape"), py::arg("rate"))
      .def_static("inverse_gamma", &GigParams::inverse_gamma, py::arg("shape"), py::arg("scale"))
      .def_static("exponential", &GigParams::exponential, py::arg("rate"))
      .def_static("rig", &GigParams::rig, py::arg("alpha"), py::arg("beta"))
      .def("__repr__", [](const GigParams& g) {
        return "GigParams(" + std::to_string(g.a()) + ", " + std::to_string(g.b()) + ", " +
               std::to_string(g.p()) + ")";
      });

  m.def("bessel_k", &bessel_k, py::arg("nu"), py::arg("x"));
  m.def("log_bessel_k", &log_bessel_k, py::arg("nu"), py::arg("x"));
  m.def("gig_log_pdf", &gig_log_pdf, py::arg("params"), py::arg("x"));
  m.def("gig_moment", &gig_moment, py::arg("params"), py::arg("q"));
  m.def("gig_mode", &gig_mode, py::arg("params"));
  m.def("gig_variance", &gig_variance, py::arg("params"));
  m.def(
      "gig_sample",
      [](const GigParams& g, int n, std::uint64_t seed) {
        Rng rng(seed);
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = gig_sample(g, rng);
        return v;
      },
      py::arg("params"), py::arg("n"), py::arg("seed") = 1);
  m.def("classify", [](const GigParams& g) {
    const SpecialCase sc = classify(g);
    return py::make_tuple(to_string(sc.kind), sc.first, sc.second);
  });

  m.def(
      "gaussian_kernel",
      [](int size, double sigma, bool one_d) {
        return one_d ? gaussian_kernel_1d(size, sigma).weights : gaussian_kernel(size, sigma).weights;
      },
      py::arg("size"), py::arg("sigma") = 0.0, py::arg("one_d") = false);
  m.def(
      "blur",
      [](const Vector& x, Index rows, Index cols, int kernel_size, double sigma, bool adjoint) {
        const Lattice lattice(rows, cols);
        const BlurOperator h(kernel_for(lattice, kernel_size, sigma), lattice);
        return adjoint ? h.apply_adjoint(x) : h.apply(x);
      },
      py::arg("x"), py::arg("rows"), py::arg("cols"), py::arg("kernel_size") = 7,
      py::arg("sigma") = 0.0, py::arg("adjoint") = false);
  m.def(
      "diff",
      [](const Vector& x, Index rows, Index cols) {
        return DiffOperator::periodic(Lattice(rows, cols)).apply(x);
      },
      py::arg("x"), py::arg("rows"), py::arg("cols"));

  m.def(
      "make_signal_1d",
      [](const std::string& kind, int points) { return make_signal_1d(parse_signal_kind(kind), points); },
      py::arg("kind"), py::arg("points") = 100);
  m.def(
      "make_image_2d",
      [](const std::string& kind, int size) {
        const ImageKind k = parse_image_kind(kind);
        return make_image_2d(k, size > 0 ? size : default_image_size(k));
      },
      py::arg("kind"), py::arg("size") = 0);
  m.def(
      "add_noise_bsnr",
      [](const Vector& blurred, double bsnr, std::uint64_t seed) {
        Rng rng(seed);
        const NoisyData d = add_noise_bsnr(blurred, bsnr, rng);
        return py::make_tuple(d.y, d.sigma);
      },
      py::arg("blurred"), py::arg("bsnr_db"), py::arg("seed") = 1);
  m.def(
      "metrics",
      [](const Vector& x_hat, const Vector& x_true) {
        const Metrics mt = compute_metrics(x_hat, x_true);
        py::dict d;
        d["rel_l2"] = mt.rel_l2;
        d["psnr"] = mt.psnr;
        return d;
      },
      py::arg("x_hat"), py::arg("x_true"));

  m.def(
      "deblur",
      [](const Vector& y, Index rows, Index cols, const std::string& method, const std::string& prior,
         int kernel_size, double sigma, double safeguard_b, double dof,
         std::tuple<double, double, double> gig, double alpha_lambda, double beta_lambda,
         double alpha_nu, double beta_nu, double tol, int maxit, int samples, int burn_in,
         std::uint64_t seed, double delta) {
        const HyperParams hp{alpha_lambda, beta_lambda, alpha_nu, beta_nu};
        return deblur(y, rows, cols, method, prior, kernel_size, sigma, safeguard_b, dof, gig, hp,
                      tol, maxit, samples, burn_in, seed, delta);
      },
      py::arg("y"), py::arg("rows"), py::arg("cols"), py::arg("method") = "ias",
      py::arg("prior") = "laplace", py::arg("kernel_size") = 7, py::arg("sigma") = 0.0,
      py::arg("safeguard_b") = PriorVariant::kDefaultSafeguard, py::arg("dof") = 2.0,
      py::arg("gig") = std::make_tuple(2.0, 0.0, 1.0), py::arg("alpha_lambda") = 0.0,
      py::arg("beta_lambda") = 0.0, py::arg("alpha_nu") = 0.0, py::arg("beta_nu") = 0.0,
      py::arg("tol") = 1e-6, py::arg("maxit") = 200, py::arg("samples") = 10000,
      py::arg("burn_in") = -1, py::arg("seed") = 1, py::arg("delta") = 1.0,
      "Deblur y (stacked column by column on a rows x cols lattice; rows = 1 for signals).");
}
