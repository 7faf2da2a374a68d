#include "commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>

#include "tvbayes/errors.hpp"
#include "tvbayes/gibbs.hpp"
#include "tvbayes/gig.hpp"
#include "tvbayes/harness/io.hpp"
#include "tvbayes/harness/metrics.hpp"
#include "tvbayes/harness/noise.hpp"
#include "tvbayes/harness/report.hpp"
#include "tvbayes/harness/signals.hpp"
#include "tvbayes/ias.hpp"
#include "tvbayes/tikhonov.hpp"
#include "tvbayes/vb.hpp"

namespace tvbayes::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct SimulateArgs {
  std::string kind;
  int size = 0;
  int kernel_size = 7;
  double sigma = 0.0;
  double bsnr = 30.0;
  std::uint64_t seed = 1;
  std::string out_prefix;
};

struct DeblurArgs {
  std::string input;
  std::string method = "ias";
  std::string prior = "laplace";
  double safeguard_b = PriorVariant::kDefaultSafeguard;
  double dof = 2.0;
  double gig_a = 2.0;
  double gig_b = 0.0;
  double gig_p = 1.0;
  HyperParams hyper;
  int kernel_size = 7;
  double sigma = 0.0;
  bool denoise = false;
  bool lasso = false;
  double tol = 1e-6;
  int maxit = 200;
  double pcg_tol = 1e-8;
  int pcg_maxit = 0;
  int samples = 10000;
  int burn_in = -1;
  int thinning = 1;
  std::uint64_t seed = 1;
  double delta = 1.0;
  std::string truth;
  std::string out_prefix;
};

struct DistArgs {
  std::string op;
  double a = 2.0;
  double b = 0.0;
  double p = 1.0;
  double q = 1.0;
  double x = 1.0;
  int n = 1;
  std::uint64_t seed = 1;
  std::string out;
};

std::string resolve_prefix(const std::string& prefix, const std::string& fallback) {
  fs::path p = prefix.empty() ? fs::path(fallback) : fs::path(prefix);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      p = fs::path(dir) / p;
    }
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p.string();
}

std::string fmt(double v) { return format_double(v); }

// Signals go to CSV. Images go to 8-bit PGM for viewing plus an exact
// row,col,value map.
void write_field(const std::string& stem, const Lattice& lattice, const Vector& v,
                 std::vector<std::string>& outputs) {
  std::string path;
  write_grid(stem, GridData{lattice, v}, &path);
  outputs.push_back(path);
  if (lattice.rows() > 1) {
    write_map_csv(stem + ".csv", lattice, v);
    outputs.push_back(stem + ".csv");
  }
}

json kernel_json(const Kernel& k, double sigma) {
  return {{"rows", k.rows()}, {"cols", k.cols()}, {"sigma", sigma}};
}

int cmd_simulate(const SimulateArgs& a) {
  const bool is_signal = a.kind == "blocky" || a.kind == "blocky_smooth";
  Vector truth;
  std::optional<Lattice> lattice;
  if (is_signal) {
    const int n = a.size > 0 ? a.size : 100;
    truth = make_signal_1d(parse_signal_kind(a.kind), n);
    lattice.emplace(1, n);
  } else {
    const ImageKind kind = parse_image_kind(a.kind);
    const int n = a.size > 0 ? a.size : default_image_size(kind);
    truth = make_image_2d(kind, n);
    lattice.emplace(n, n);
  }
  const double sigma = a.sigma > 0.0 ? a.sigma : default_kernel_sigma(a.kernel_size);
  const Kernel kernel =
      is_signal ? gaussian_kernel_1d(a.kernel_size, sigma) : gaussian_kernel(a.kernel_size, sigma);
  const BlurOperator h(kernel, *lattice);
  const Vector blurred = h.apply(truth);
  Rng rng(a.seed);
  const NoisyData noisy = add_noise_bsnr(blurred, a.bsnr, rng);

  const std::string prefix = resolve_prefix(a.out_prefix, a.kind);
  std::vector<std::string> outputs;
  write_field(prefix + "_truth", *lattice, truth, outputs);
  write_field(prefix + "_blurred", *lattice, blurred, outputs);
  write_field(prefix + "_noisy", *lattice, noisy.y, outputs);

  json sidecar;
  sidecar["schema_version"] = kReportSchemaVersion;
  sidecar["kind"] = a.kind;
  sidecar["lattice"] = {{"rows", lattice->rows()}, {"cols", lattice->cols()}};
  sidecar["kernel"] = kernel_json(kernel, sigma);
  sidecar["bsnr_db"] = json_number(a.bsnr);
  sidecar["noise_sigma"] = noisy.sigma;
  sidecar["seed"] = a.seed;
  sidecar["outputs"] = outputs;
  write_json(prefix + "_sim.json", sidecar);
  std::cout << "wrote " << outputs.size() + 1 << " files with prefix " << prefix
            << " (noise sigma " << fmt(noisy.sigma) << ")\n";
  return kOk;
}

PriorVariant make_prior(const DeblurArgs& a) {
  if (a.prior == "laplace") return PriorVariant::laplace_tv(a.safeguard_b);
  if (a.prior == "student") return PriorVariant::student_tv(a.dof);
  if (a.prior == "laplace2d") return PriorVariant::laplace_2d(GigParams(a.gig_a, a.gig_b, a.gig_p));
  if (a.prior == "gig") return PriorVariant::custom_gig(GigParams(a.gig_a, a.gig_b, a.gig_p));
  throw DomainError("unknown prior '" + a.prior + "'");
}

json config_json(const DeblurArgs& a, const Kernel& kernel, double sigma, const PriorVariant& prior) {
  json c;
  c["input"] = a.input;
  c["method"] = a.method;
  c["prior"] = {{"kind", a.prior},
                {"mixing", {{"a", prior.mixing().a()}, {"b", prior.mixing().b()}, {"p", prior.mixing().p()}}},
                {"safeguard_b", a.safeguard_b},
                {"dof", a.dof}};
  c["hyper"] = {{"alpha_lambda", a.hyper.alpha_lambda},
                {"beta_lambda", a.hyper.beta_lambda},
                {"alpha_nu", a.hyper.alpha_nu},
                {"beta_nu", a.hyper.beta_nu}};
  c["kernel"] = kernel_json(kernel, sigma);
  c["denoise"] = a.denoise;
  c["lasso"] = a.lasso;
  c["tol"] = a.tol;
  c["maxit"] = a.maxit;
  c["pcg_tol"] = a.pcg_tol;
  c["pcg_maxit"] = a.pcg_maxit;
  c["samples"] = a.samples;
  c["burn_in"] = a.burn_in < 0 ? default_burn_in(a.samples) : a.burn_in;
  c["thinning"] = a.thinning;
  c["seed"] = a.seed;
  c["delta"] = a.delta;
  c["truth"] = a.truth;
  return c;
}

int cmd_deblur(const DeblurArgs& a) {
  const GridData input = read_grid(a.input);
  const Lattice& lattice = input.lattice;
  const Vector& y = input.data;
  const bool is_signal = lattice.rows() == 1;

  const double sigma = a.sigma > 0.0 ? a.sigma : default_kernel_sigma(a.kernel_size);
  const Kernel kernel = a.denoise      ? identity_kernel()
                        : is_signal    ? gaussian_kernel_1d(a.kernel_size, sigma)
                                       : gaussian_kernel(a.kernel_size, sigma);
  BlurOperator h(kernel, lattice);
  DiffOperator d = a.lasso ? DiffOperator::identity(lattice) : DiffOperator::periodic(lattice);
  const PriorVariant prior = make_prior(a);

  std::optional<Vector> truth;
  if (!a.truth.empty()) {
    GridData t = read_grid(a.truth);
    if (!(t.lattice == lattice)) throw DomainError("--truth does not match the input dimensions");
    truth = std::move(t.data);
  }

  RunReport report;
  report.estimator = a.method;
  report.config = config_json(a, kernel, sigma, prior);
  report.rows = lattice.rows();
  report.cols = lattice.cols();
  const std::string prefix = resolve_prefix(a.out_prefix, a.method);
  std::vector<std::string>& outputs = report.outputs;

  PcgOptions pcg;
  pcg.tol = a.pcg_tol;
  pcg.maxit = a.pcg_maxit;

  const auto start = std::chrono::steady_clock::now();
  if (a.method == "tikhonov") {
    const PcgResult res = tikhonov_solve(y, h, d, a.delta, pcg);
    report.x = res.x;
    report.iterations = 1;
    report.converged = true;
    report.trace_columns = {"iteration", "pcg_iterations", "relative_residual"};
    report.trace = {{1.0, static_cast<double>(res.iterations), res.relative_residual}};
  } else {
    const ModelSpec model(std::move(h), std::move(d), a.hyper, prior);
    if (a.method == "ias") {
      IasOptions opts;
      opts.tol = a.tol;
      opts.maxit = a.maxit;
      opts.pcg = pcg;
      const IasState st = ias_run(y, model, opts);
      report.x = st.state.x;
      report.nu = st.state.nu;
      report.lambda = st.state.lambda;
      report.iterations = st.iterations;
      report.converged = st.converged;
      report.trace_columns = {"iteration", "log_posterior", "x_change", "nu", "lambda", "pcg_iterations",
                              "pcg_residual"};
      for (const IasTraceEntry& e : st.trace) {
        report.trace.push_back({static_cast<double>(e.iteration), e.log_posterior, e.x_change, e.nu,
                                e.lambda, static_cast<double>(e.pcg_iterations), e.pcg_residual});
      }
    } else if (a.method == "vb") {
      VbOptions opts;
      opts.tol = a.tol;
      opts.maxit = a.maxit;
      const VbState st = vb_run(y, model, opts);
      report.x = st.mean;
      report.nu = st.nu_mean();
      report.lambda = st.lambda_mean();
      report.iterations = st.iterations;
      report.converged = st.converged;
      report.trace_columns = {"iteration", "x_change", "nu_mean", "lambda_mean"};
      for (const VbTraceEntry& e : st.trace) {
        report.trace.push_back({static_cast<double>(e.iteration), e.x_change, e.nu_mean, e.lambda_mean});
      }
      report.extra["nu_factor"] = {{"shape", st.nu_shape}, {"rate", st.nu_rate}};
      report.extra["lambda_factor"] = {{"shape", st.lambda_shape}, {"rate", st.lambda_rate}};
      const Vector sd = st.marginal_sd();
      if (is_signal) {
        write_signal_csv(prefix + "_sd.csv", sd);
      } else {
        write_map_csv(prefix + "_sd.csv", lattice, sd);
      }
      outputs.push_back(prefix + "_sd.csv");
      write_file(prefix + "_factors.csv", "factor,shape,rate\nnu," + fmt(st.nu_shape) + "," +
                                              fmt(st.nu_rate) + "\nlambda," + fmt(st.lambda_shape) +
                                              "," + fmt(st.lambda_rate) + "\n");
      outputs.push_back(prefix + "_factors.csv");
    } else if (a.method == "gibbs") {
      GibbsOptions opts;
      opts.seed = a.seed;
      opts.samples = a.samples;
      opts.burn_in = a.burn_in;
      opts.thinning = a.thinning;
      const GibbsChain chain = gibbs_run(y, model, opts);
      report.x = chain.mean;
      report.nu = chain.nu_mean();
      report.lambda = chain.lambda_mean();
      report.iterations = chain.samples;
      report.converged = true;
      report.seed = a.seed;
      report.trace_columns = {"sample", "nu", "lambda"};
      for (int k = 0; k < chain.samples; ++k) {
        report.trace.push_back({static_cast<double>(k + 1), chain.nu_trace[k], chain.lambda_trace[k]});
      }
      report.extra["burn_in"] = chain.burn_in;
      report.extra["thinning"] = chain.thinning;
      write_signal_csv(prefix + "_nu_trace.csv", Eigen::Map<const Vector>(chain.nu_trace.data(), chain.samples));
      write_signal_csv(prefix + "_lambda_trace.csv",
                       Eigen::Map<const Vector>(chain.lambda_trace.data(), chain.samples));
      outputs.push_back(prefix + "_nu_trace.csv");
      outputs.push_back(prefix + "_lambda_trace.csv");
      const Vector sd = chain.sd();
      if (is_signal) {
        write_signal_csv(prefix + "_sd.csv", sd);
      } else {
        write_map_csv(prefix + "_sd.csv", lattice, sd);
      }
      outputs.push_back(prefix + "_sd.csv");
    } else {
      throw DomainError("unknown method '" + a.method + "'");
    }
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (truth) report.metrics = compute_metrics(report.x, *truth);

  write_field(prefix + "_estimate", lattice, report.x, outputs);
  std::vector<std::vector<double>> columns(report.trace_columns.size());
  for (const auto& row : report.trace) {
    for (std::size_t k = 0; k < row.size(); ++k) columns[k].push_back(row[k]);
  }
  write_table_csv(prefix + "_trace.csv", report.trace_columns, columns);
  outputs.push_back(prefix + "_trace.csv");
  outputs.push_back(prefix + "_report.json");
  write_json(prefix + "_report.json", report.to_json());

  std::cout << a.method << ": " << report.iterations << " iterations"
            << (report.converged ? "" : " (not converged)");
  if (report.lambda) std::cout << ", lambda " << fmt(*report.lambda) << ", nu " << fmt(*report.nu);
  if (report.metrics) {
    std::cout << ", rel_l2 " << fmt(report.metrics->rel_l2) << ", psnr " << fmt(report.metrics->psnr);
  }
  std::cout << "\n";
  return kOk;
}

int cmd_dist(const DistArgs& a) {
  const GigParams g(a.a, a.b, a.p);
  if (a.op == "pdf") {
    std::cout << fmt(std::exp(gig_log_pdf(g, a.x))) << "\n";
  } else if (a.op == "logpdf") {
    std::cout << fmt(gig_log_pdf(g, a.x)) << "\n";
  } else if (a.op == "moment") {
    std::cout << fmt(gig_moment(g, a.q)) << "\n";
  } else if (a.op == "mode") {
    std::cout << fmt(gig_mode(g)) << "\n";
  } else if (a.op == "var") {
    std::cout << fmt(gig_variance(g)) << "\n";
  } else if (a.op == "classify") {
    const SpecialCase sc = classify(g);
    std::cout << to_string(sc.kind) << " " << fmt(sc.first) << " " << fmt(sc.second) << "\n";
  } else if (a.op == "sample") {
    if (a.n < 1) throw DomainError("--n must be at least 1");
    Rng rng(a.seed);
    Vector draws(a.n);
    for (int i = 0; i < a.n; ++i) draws[i] = gig_sample(g, rng);
    if (a.out.empty() && a.n <= 20) {
      for (int i = 0; i < a.n; ++i) std::cout << fmt(draws[i]) << "\n";
    } else {
      const std::string path = resolve_prefix(a.out, "gig_samples.csv");
      write_signal_csv(path, draws);
      std::cout << "wrote " << a.n << " draws to " << path << " (mean " << fmt(draws.mean()) << ")\n";
    }
  } else {
    throw DomainError("unknown op '" + a.op + "'");
  }
  return kOk;
}

int report_error(const char* kind, const std::exception& e, int code) {
  std::cerr << "tvbayes: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Hierarchical Bayesian total-variation deblurring"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate a test problem (truth, blurred, noisy)");
  simulate->add_option("--kind", sim.kind, "blocky, blocky_smooth, blocks42 or shepp_logan")
      ->required()
      ->check(CLI::IsMember({"blocky", "blocky_smooth", "blocks42", "shepp_logan"}));
  simulate->add_option("--size", sim.size, "Points (signals) or side length (images)");
  simulate->add_option("--kernel-size", sim.kernel_size, "Odd Gaussian mask size")->capture_default_str();
  simulate->add_option("--sigma", sim.sigma, "Kernel standard deviation (default size/4)");
  simulate->add_option("--bsnr", sim.bsnr, "Blurred signal-to-noise ratio in dB")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
  simulate->add_option("--out-prefix", sim.out_prefix, "Output path prefix");

  DeblurArgs db;
  CLI::App* deblur = app.add_subcommand("deblur", "Estimate an image from blurred, noisy data");
  deblur->add_option("--input", db.input, "Data file (.csv signal, .csv map or .pgm)")->required();
  deblur->add_option("--method", db.method)
      ->check(CLI::IsMember({"ias", "vb", "gibbs", "tikhonov"}))
      ->capture_default_str();
  deblur->add_option("--prior", db.prior)
      ->check(CLI::IsMember({"laplace", "student", "laplace2d", "gig"}))
      ->capture_default_str();
  deblur->add_option("--safeguard-b", db.safeguard_b, "b of the GIG(2, b, 1) mixing; 0 is exact Laplace")
      ->capture_default_str();
  deblur->add_option("--dof", db.dof, "Student-t degrees of freedom")->capture_default_str();
  deblur->add_option("--gig-a", db.gig_a, "Mixing a for --prior gig/laplace2d")->capture_default_str();
  deblur->add_option("--gig-b", db.gig_b, "Mixing b for --prior gig/laplace2d")->capture_default_str();
  deblur->add_option("--gig-p", db.gig_p, "Mixing p for --prior gig/laplace2d")->capture_default_str();
  deblur->add_option("--alpha-lambda", db.hyper.alpha_lambda)->capture_default_str();
  deblur->add_option("--beta-lambda", db.hyper.beta_lambda)->capture_default_str();
  deblur->add_option("--alpha-nu", db.hyper.alpha_nu)->capture_default_str();
  deblur->add_option("--beta-nu", db.hyper.beta_nu)->capture_default_str();
  deblur->add_option("--kernel-size", db.kernel_size, "Odd Gaussian mask size")->capture_default_str();
  deblur->add_option("--sigma", db.sigma, "Kernel standard deviation (default size/4)");
  deblur->add_flag("--denoise", db.denoise, "Use H = I");
  deblur->add_flag("--lasso", db.lasso, "Use D = I");
  deblur->add_option("--tol", db.tol)->capture_default_str();
  deblur->add_option("--maxit", db.maxit)->capture_default_str();
  deblur->add_option("--pcg-tol", db.pcg_tol)->capture_default_str();
  deblur->add_option("--pcg-maxit", db.pcg_maxit, "0 selects 10 sqrt(N)")->capture_default_str();
  deblur->add_option("--samples", db.samples, "Kept Gibbs samples")->capture_default_str();
  deblur->add_option("--burn-in", db.burn_in, "Gibbs burn-in (default 20% of samples)");
  deblur->add_option("--thinning", db.thinning)->capture_default_str();
  deblur->add_option("--seed", db.seed)->capture_default_str();
  deblur->add_option("--delta", db.delta, "Tikhonov penalty weight")->capture_default_str();
  deblur->add_option("--truth", db.truth, "Ground truth for metrics");
  deblur->add_option("--out-prefix", db.out_prefix, "Output path prefix");

  DistArgs da;
  CLI::App* dist = app.add_subcommand("dist", "Evaluate GIG densities, moments and samples");
  dist->add_option("--op", da.op)
      ->required()
      ->check(CLI::IsMember({"pdf", "logpdf", "moment", "mode", "var", "sample", "classify"}));
  dist->add_option("--a", da.a)->capture_default_str();
  dist->add_option("--b", da.b)->capture_default_str();
  dist->add_option("--p", da.p)->capture_default_str();
  dist->add_option("--q", da.q)->capture_default_str();
  dist->add_option("--x", da.x)->capture_default_str();
  dist->add_option("--n", da.n)->capture_default_str();
  dist->add_option("--seed", da.seed)->capture_default_str();
  dist->add_option("--out", da.out, "CSV destination for --op sample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*deblur) return cmd_deblur(db);
    if (*dist) return cmd_dist(da);
  } catch (const ParseError& e) {
    return report_error("parse error", e, kUsage);
  } catch (const IoError& e) {
    return report_error("I/O error", e, kUsage);
  } catch (const fs::filesystem_error& e) {
    return report_error("I/O error", e, kUsage);
  } catch (const ModelError& e) {
    return report_error("model error", e, kModel);
  } catch (const CapacityError& e) {
    return report_error("capacity error", e, kCapacity);
  } catch (const DivergenceError& e) {
    return report_error("divergence", e, kDivergence);
  } catch (const DegeneracyError& e) {
    return report_error("degeneracy", e, kDegeneracy);
  } catch (const ConvergenceError& e) {
    return report_error("convergence failure", e, kConvergence);
  } catch (const NotSpdError& e) {
    return report_error("convergence failure", e, kConvergence);
  } catch (const NonfiniteError& e) {
    return report_error("numerical failure", e, kConvergence);
  } catch (const DomainError& e) {
    return report_error("invalid parameters", e, kModel);
  } catch (const MomentDivergesError& e) {
    return report_error("invalid parameters", e, kModel);
  } catch (const RangeError& e) {
    return report_error("invalid parameters", e, kModel);
  } catch (const std::exception& e) {
    return report_error("error", e, kInternal);
  }
  return kInternal;
}

int run(const std::vector<std::string>& args) {
  std::vector<char*> argv;
  std::string name = "tvbayes";
  argv.push_back(name.data());
  std::vector<std::string> copy = args;
  for (std::string& s : copy) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace tvbayes::cli
