#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "horizon/cli.hpp"
#include "horizon/report.hpp"

using namespace horizon;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "horizon-risk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "horizon_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("doubles print with 17 significant digits and parse back exactly") {
  for (double v : {0.1, 1.0 / 3.0, 2.0 / 3.0 * 1e-7, 123456.789, -0.0, 5e-324}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV round trip is lossless") {
  std::vector<SweepRow> rows;
  for (int k = 0; k < 4; ++k) {
    RiskEstimate e;
    e.n = 32 << k;
    e.denoiser = k < 2 ? "box" : "nlm";
    e.sigma = 0.5;
    e.trials = 50;
    e.mean_risk = 1.0 / (3.0 + k);
    e.standard_error = e.mean_risk / 7.0;
    e.bias_sq = e.mean_risk * 0.3;
    e.variance = e.mean_risk - e.bias_sq;
    rows.push_back({e, k < 2 ? -2.0 / 3.0 : -1.0});
  }
  std::stringstream ss;
  write_csv(ss, rows);
  CHECK(ss.str().rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  const auto back = read_csv(ss);
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(back[k].estimate.n == rows[k].estimate.n);
    CHECK(back[k].estimate.denoiser == rows[k].estimate.denoiser);
    CHECK(back[k].estimate.mean_risk == rows[k].estimate.mean_risk);
    CHECK(back[k].estimate.standard_error == rows[k].estimate.standard_error);
    CHECK(back[k].estimate.bias_sq == rows[k].estimate.bias_sq);
    CHECK(back[k].estimate.variance == rows[k].estimate.variance);
    CHECK(back[k].slope_ref == rows[k].slope_ref);
  }
  std::stringstream again;
  write_csv(again, back);
  std::stringstream first;
  write_csv(first, rows);
  CHECK(again.str() == first.str());
}

TEST_CASE("CSV reader rejects malformed input") {
  std::stringstream bad_header("n,what\n");
  CHECK_THROWS_AS(read_csv(bad_header), InvalidArgument);
  std::stringstream short_row(std::string(kCsvHeader) + "\n32,box,0.5\n");
  CHECK_THROWS_AS(read_csv(short_row), InvalidArgument);
  std::stringstream bad_number(std::string(kCsvHeader) + "\n32,box,0.5,50,abc,0,0,0,-1\n");
  CHECK_THROWS_AS(read_csv(bad_number), InvalidArgument);
}

TEST_CASE("matrix dump") {
  ImageGrid g(2, std::vector<double>{0.0, 1.0, 0.5, 0.25});
  std::stringstream ss;
  write_matrix_csv(ss, g);
  CHECK(ss.str() == "0,1\n0.5,0.25\n");
}

TEST_CASE("selftest exits 0") {
  const Run r = cli({"selftest"});
  CHECK(r.status == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS p0_reference(1)") != std::string::npos);
}

TEST_CASE("fit on an exact power law prints -0.6667") {
  const fs::path p = scratch("power.csv");
  {
    std::vector<SweepRow> rows;
    for (int n : {32, 64, 128, 256}) {
      RiskEstimate e;
      e.n = n;
      e.denoiser = "box";
      e.sigma = 0.5;
      e.trials = 50;
      e.mean_risk = 3.0 * std::pow(n, -2.0 / 3.0);
      e.standard_error = 1e-4;
      rows.push_back({e, -2.0 / 3.0});
    }
    std::ofstream f(p);
    write_csv(f, rows);
  }
  const Run r = cli({"fit", "--input", p.string()});
  CHECK(r.status == 0);
  CHECK(r.out.find("slope -0.6667") != std::string::npos);
  const Run w = cli({"fit", "--input", p.string(), "--weighted"});
  CHECK(w.out.find("slope -0.6667") != std::string::npos);
}

TEST_CASE("sweep writes a deterministic CSV, a JSON sidecar and a plot script") {
  const fs::path a = scratch("a.csv"), b = scratch("b.csv");
  const std::vector<std::string> common{"sweep", "--denoiser", "box", "--contour", "const:0.5", "--n", "32,64,128",
                                        "--sigma", "0.5", "--trials", "50", "--seed", "7", "--plot"};
  auto args_a = common, args_b = common;
  args_a.insert(args_a.end(), {"--output", a.string()});
  args_b.insert(args_b.end(), {"--output", b.string()});
  REQUIRE(cli(args_a).status == 0);
  REQUIRE(cli(args_b).status == 0);
  const std::string ca = slurp(a);
  CHECK(ca == slurp(b));
  std::stringstream ss(ca);
  const auto rows = read_csv(ss);
  CHECK(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.slope_ref == doctest::Approx(-2.0 / 3.0));
  const auto meta = nlohmann::json::parse(slurp(a.string() + ".json"));
  CHECK(meta["master_seed"] == 7);
  CHECK(meta["generator"] == "philox4x32-10+box-muller/v1");
  CHECK(meta.contains("wall_time_s"));
  CHECK(meta.contains("version"));
  CHECK(meta["config"]["n"].size() == 3);
  CHECK(meta["tuning"].size() == 3);
  const std::string gp = slurp(a.string() + ".gp");
  CHECK(gp.find("set logscale xy") != std::string::npos);
  CHECK(gp.find("minimax") != std::string::npos);
}

TEST_CASE("config errors exit 1 before any computation") {
  CHECK(cli({"sweep", "--denoiser", "box", "--n", "64,32,128"}).status == 1);
  CHECK(cli({"sweep", "--denoiser", "box", "--n", "32,64"}).status == 1);
  CHECK(cli({"sweep", "--denoiser", "wavelet", "--n", "30,60,120"}).status == 1);
  CHECK(cli({"sweep", "--denoiser", "median", "--n", "32,64,128"}).status == 1);
  CHECK(cli({"sweep", "--denoiser", "nlm", "--n", "64,128,512"}).status == 1);
  CHECK(cli({"sweep", "--denoiser", "box", "--n", "32,64,128", "--sigma", "-1"}).status == 1);
  CHECK(cli({"denoise", "--denoiser", "box", "--n", "8", "--halfwidth", "4"}).status == 1);
  CHECK(cli({"render", "--n", "16", "--contour", "sin:0.5,4,0.5"}).status == 1);
  CHECK(cli({"diagnose", "--n", "63"}).status == 1);
  CHECK(cli({"fit"}).status == 1);
  CHECK(cli({"bogus"}).status == 1);
  CHECK(cli({}).status == 1);
  const Run r = cli({"fit", "--input", "/nonexistent/file.csv"});
  CHECK(r.status == 1);
  CHECK(r.err.find("config error") != std::string::npos);
}

TEST_CASE("computation errors exit 2") {
  const fs::path p = scratch("short.csv");
  {
    std::ofstream f(p);
    f << kCsvHeader << "\n32,box,0.5,50,0.1,0.01,0.05,0.05,-0.6666\n64,box,0.5,50,0.05,0.01,0.02,0.03,-0.6666\n";
  }
  CHECK(cli({"fit", "--input", p.string()}).status == 2);
  CHECK(cli({"sweep", "--denoiser", "box", "--n", "16,32,64", "--trials", "3", "--output",
             "/nonexistent/dir/out.csv"}).status == 2);
}

TEST_CASE("render, denoise and diagnose run") {
  const Run r = cli({"render", "--n", "4", "--contour", "const:0.5"});
  CHECK(r.status == 0);
  CHECK(r.out == "1,1,1,1\n1,1,1,1\n0,0,0,0\n0,0,0,0\n");
  const Run d = cli({"denoise", "--denoiser", "box,wavelet,nlm", "--n", "32", "--sigma", "0.5", "--seed", "3"});
  CHECK(d.status == 0);
  CHECK(d.out.find("wavelet: mse") != std::string::npos);
  const fs::path j = scratch("diag.json");
  const Run g = cli({"diagnose", "--n", "32", "--sigma", "1", "--trials", "3", "--output", j.string()});
  CHECK(g.status == 0);
  CHECK(g.out.find("fraction_passing_J") != std::string::npos);
  const auto meta = nlohmann::json::parse(slurp(j));
  CHECK(meta["diagnostics"]["p0_reference"].get<double>() == doctest::Approx(0.1198750305));
}

TEST_CASE("installed binary follows the exit code convention") {
  const std::string bin = HORIZON_CLI_PATH;
  CHECK(std::system((bin + " selftest > /dev/null").c_str()) == 0);
  const int bad = std::system((bin + " sweep --denoiser box --n 1,2 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(bad) == 1);
  CHECK(std::system((bin + " --help > /dev/null").c_str()) == 0);
}
