#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "tvbayes/gig.hpp"
#include "tvbayes/harness/io.hpp"

using namespace tvbayes;
namespace fs = std::filesystem;

namespace {

fs::path out_dir() {
  const char* env = std::getenv(cli::kOutputDirEnv);
  const fs::path p = env != nullptr && *env != '\0' ? fs::path(env) : fs::temp_directory_path() / "tvbayes_cli_tests";
  fs::create_directories(p);
  return fs::absolute(p);
}

std::string at(const std::string& name) { return (out_dir() / name).string(); }

struct Captured {
  int code;
  std::string out;
};

Captured run_captured(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = cli::run(args);
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str()};
}

nlohmann::json load_json(const std::string& path) { return nlohmann::json::parse(read_file(path)); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate a signal") {
  const std::string p = at("sig");
  REQUIRE(run_captured({"simulate", "--kind", "blocky", "--size", "64", "--out-prefix", p}).code == 0);
  for (const char* suffix : {"_truth.csv", "_blurred.csv", "_noisy.csv", "_sim.json"}) {
    CHECK(fs::exists(p + suffix));
  }
  const nlohmann::json sim = load_json(p + "_sim.json");
  CHECK(sim["lattice"]["cols"] == 64);
  CHECK(sim["noise_sigma"].get<double>() > 0.0);
  CHECK(read_signal_csv(p + "_noisy.csv").size() == 64);
}

TEST_CASE("kernel size 1 leaves the truth unblurred") {
  const std::string p = at("k1");
  REQUIRE(run_captured({"simulate", "--kind", "blocks42", "--kernel-size", "1", "--out-prefix", p}).code == 0);
  const GridData truth = read_grid(p + "_truth.csv");
  const GridData blurred = read_grid(p + "_blurred.csv");
  CHECK(truth.lattice == Lattice(42, 42));
  CHECK(truth.data == blurred.data);
  CHECK(fs::exists(p + "_noisy.pgm"));
}

TEST_CASE("phantom at full size") {
  const std::string p = at("shepp");
  REQUIRE(run_captured({"simulate", "--kind", "shepp_logan", "--out-prefix", p}).code == 0);
  const GridData g = read_grid(p + "_truth.pgm");
  CHECK(g.lattice == Lattice(200, 200));
}

TEST_CASE("deblur with each method") {
  const std::string sim = at("pipe");
  REQUIRE(run_captured({"simulate", "--kind", "blocky", "--size", "48", "--kernel-size", "5", "--out-prefix", sim})
              .code == 0);
  const std::string in = sim + "_noisy.csv";
  const std::string truth = sim + "_truth.csv";

  const std::string ias = at("pipe_ias");
  REQUIRE(run_captured({"deblur", "--input", in, "--kernel-size", "5", "--truth", truth, "--out-prefix", ias})
              .code == 0);
  const nlohmann::json r = load_json(ias + "_report.json");
  CHECK(r["schema_version"] == 1);
  CHECK(r["estimator"] == "ias");
  CHECK(r["iterations"].get<int>() <= 200);
  CHECK(r["trace"].size() == r["iterations"].get<std::size_t>());
  CHECK(r["estimates"]["x"].size() == 48);
  CHECK(r["metrics"]["rel_l2"].get<double>() < 0.5);
  CHECK(fs::exists(ias + "_estimate.csv"));
  CHECK(fs::exists(ias + "_trace.csv"));

  const std::string vb = at("pipe_vb");
  REQUIRE(run_captured({"deblur", "--input", in, "--kernel-size", "5", "--method", "vb", "--out-prefix", vb}).code ==
          0);
  CHECK(fs::exists(vb + "_sd.csv"));
  CHECK(fs::exists(vb + "_factors.csv"));

  const std::string gb = at("pipe_gibbs");
  REQUIRE(run_captured({"deblur", "--input", in, "--kernel-size", "5", "--method", "gibbs", "--samples", "100",
                        "--seed", "3", "--out-prefix", gb})
              .code == 0);
  CHECK(read_signal_csv(gb + "_nu_trace.csv").size() == 100);
  CHECK(read_signal_csv(gb + "_lambda_trace.csv").size() == 100);
  CHECK(fs::exists(gb + "_sd.csv"));
  const nlohmann::json g = load_json(gb + "_report.json");
  CHECK(g["seed"] == 3);
  CHECK(g["extra"]["burn_in"] == 20);

  // Same seed, same estimate.
  const std::string gb2 = at("pipe_gibbs2");
  REQUIRE(run_captured({"deblur", "--input", in, "--kernel-size", "5", "--method", "gibbs", "--samples", "100",
                        "--seed", "3", "--out-prefix", gb2})
              .code == 0);
  CHECK(read_file(gb + "_estimate.csv") == read_file(gb2 + "_estimate.csv"));

  const std::string tk = at("pipe_tik");
  CHECK(run_captured({"deblur", "--input", in, "--kernel-size", "5", "--method", "tikhonov", "--delta", "0.05",
                      "--out-prefix", tk})
            .code == 0);
  CHECK(run_captured({"deblur", "--input", in, "--method", "tikhonov", "--delta", "0", "--out-prefix", tk}).code ==
        3);
}

TEST_CASE("exit codes") {
  const std::string big = at("big");
  REQUIRE(run_captured({"simulate", "--kind", "blocks42", "--size", "65", "--out-prefix", big}).code == 0);
  CHECK(run_captured({"deblur", "--input", big + "_noisy.csv", "--method", "vb", "--out-prefix", at("big_vb")})
            .code == 4);
  CHECK(run_captured({"deblur", "--input", big + "_noisy.csv", "--method", "gibbs", "--out-prefix", at("big_g")})
            .code == 4);
  CHECK(run_captured({}).code == 2);
  CHECK(run_captured({"simulate"}).code == 2);
  CHECK(run_captured({"simulate", "--kind", "triangle"}).code == 2);
  CHECK(run_captured({"deblur", "--input", at("nope.csv")}).code == 2);
  CHECK(run_captured({"deblur", "--input", big + "_sim.json"}).code == 2);
  write_file(at("bad.csv"), "value\n1\nfoo\n");
  CHECK(run_captured({"deblur", "--input", at("bad.csv")}).code == 2);
  CHECK(run_captured({"dist", "--op", "mode", "--a", "-1"}).code == 3);
  CHECK(run_captured({"dist", "--op", "moment", "--a", "0", "--b", "2", "--p", "-1", "--q", "2"}).code == 3);
  // Constant input with the exact Laplace prior collapses the latents.
  write_file(at("flat.csv"), "value\n0.5\n0.5\n0.5\n0.5\n0.5\n0.5\n");
  CHECK(run_captured({"deblur", "--input", at("flat.csv"), "--denoise", "--safeguard-b", "0", "--out-prefix",
                      at("flat")})
            .code != 0);
}

TEST_CASE("dist") {
  const Captured m = run_captured({"dist", "--op", "moment", "--a", "2", "--b", "2", "--p", "0.5", "--q", "1"});
  CHECK(m.code == 0);
  CHECK(std::stod(m.out) == doctest::Approx(gig_mean(GigParams(2, 2, 0.5))).epsilon(1e-15));
  const Captured c = run_captured({"dist", "--op", "classify", "--a", "2", "--b", "0", "--p", "1"});
  CHECK(c.out.rfind("Exp ", 0) == 0);
  const Captured s = run_captured({"dist", "--op", "sample", "--n", "5", "--seed", "4"});
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 5);
  CHECK(run_captured({"dist", "--op", "sample", "--n", "5", "--seed", "4"}).out == s.out);
  const std::string csv = at("draws.csv");
  CHECK(run_captured({"dist", "--op", "sample", "--n", "500", "--out", csv}).code == 0);
  CHECK(read_signal_csv(csv).size() == 500);
  const Captured lp = run_captured({"dist", "--op", "logpdf", "--x", "2"});
  CHECK(std::stod(lp.out) == doctest::Approx(gig_log_pdf(GigParams(2, 0, 1), 2.0)));
}

TEST_CASE("relative prefixes land in the output directory") {
  const fs::path dir = out_dir() / "env";
  const char* old = std::getenv(cli::kOutputDirEnv);
  const std::string saved = old ? old : "";
  setenv(cli::kOutputDirEnv, dir.c_str(), 1);
  const int code = run_captured({"simulate", "--kind", "blocky", "--out-prefix", "rel/sig"}).code;
  if (old) {
    setenv(cli::kOutputDirEnv, saved.c_str(), 1);
  } else {
    unsetenv(cli::kOutputDirEnv);
  }
  CHECK(code == 0);
  CHECK(fs::exists(dir / "rel" / "sig_noisy.csv"));
}

}  // TEST_SUITE
