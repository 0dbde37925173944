#include "horizon/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "horizon/horizon_model.hpp"
#include "horizon/linear_filters.hpp"
#include "horizon/neighborhood_filters.hpp"
#include "horizon/nlm.hpp"
#include "horizon/noise.hpp"
#include "horizon/report.hpp"
#include "horizon/risk_lab.hpp"
#include "horizon/wavelet.hpp"

#ifndef HORIZON_VERSION
#define HORIZON_VERSION "unknown"
#endif

namespace horizon {

namespace {

using json = nlohmann::json;

constexpr int kNlmDefaultMaxN = 256;

OracleLevel parse_oracle(const std::string& s) {
  if (s == "none") return OracleLevel::none;
  if (s == "semi") return OracleLevel::semi;
  if (s == "full") return OracleLevel::full;
  throw InvalidArgument("oracle must be none, semi or full, got '" + s + "'");
}

bool is_nlm(Family f) { return f == Family::nlm || f == Family::nlm_semi || f == Family::nlm_tapered; }

std::string sidecar_path(const std::string& output) { return output + ".json"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error("write to '" + path + "' failed");
}

json config_json(const RunConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  j["contour"] = c.contour;
  j["alpha"] = c.alpha;
  j["holder_c"] = c.holder_c;
  j["denoisers"] = c.denoisers;
  j["n"] = c.n_list;
  j["sigma"] = c.sigma;
  j["trials"] = c.trials;
  j["epsilon"] = c.epsilon;
  j["output"] = c.output_path;
  j["emit_plot"] = c.emit_plot;
  j["window"] = c.window ? json(*c.window) : json(nullptr);
  return j;
}

json metadata(const RunConfig& c, double wall_seconds) {
  json j;
  j["config"] = config_json(c);
  j["master_seed"] = c.master_seed;
  j["generator"] = std::string(kGeneratorName);
  j["version"] = HORIZON_VERSION;
  j["wall_time_s"] = wall_seconds;
  return j;
}

EdgeContour contour_of(const RunConfig& c) { return parse_contour(c.contour, c.alpha, c.holder_c); }

// Single-image denoiser built from a family name and the override flags.
DenoiserSpec single_denoiser(const RunConfig& c, const std::string& name, int n) {
  switch (parse_family(name)) {
    case Family::identity: return IdentityDenoiser{};
    case Family::box: return BoxDenoiser{c.halfwidth};
    case Family::yaroslavsky: return YaroslavskyDenoiser{YfParams{c.delta.value_or(1), c.sigma, true}};
    case Family::nlm:
    case Family::nlm_semi: {
      NlmParams p = default_params(n, c.epsilon, c.sigma);
      if (parse_family(name) == Family::nlm_semi) p.oracle = OracleLevel::semi;
      if (c.delta) p.delta = *c.delta;
      if (c.t) p.t = *c.t;
      p.window = c.window;
      return NlmDenoiser{p};
    }
    case Family::nlm_tapered: {
      NlmParams p = tapered_default_params(n, c.sigma);
      if (c.delta) p.delta = *c.delta;
      p.window = c.window;
      return NlmDenoiser{p};
    }
    case Family::wavelet: return WaveletDenoiser{};
  }
  return IdentityDenoiser{};
}

int cmd_render(const RunConfig& c, std::ostream& out) {
  const ImageGrid img = render(contour_of(c), c.n_list.front());
  if (c.output_path.empty()) {
    write_matrix_csv(out, img);
  } else {
    std::ostringstream os;
    write_matrix_csv(os, img);
    write_text(c.output_path, os.str());
    out << "wrote " << c.output_path << '\n';
  }
  return 0;
}

int cmd_denoise(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const int n = c.n_list.front();
  const ImageGrid clean = render(contour_of(c), n);
  const ImageGrid noisy = add_noise(clean, NoiseSpec{c.sigma, c.master_seed, 0});
  json results = json::array();
  for (const auto& name : c.denoisers) {
    const DenoiserSpec spec = single_denoiser(c, name, n);
    const ImageGrid est = apply_denoiser(spec, noisy, clean, c.sigma);
    const double mse = mean_squared_error(clean, est);
    out << name << ": mse " << format_double(mse) << " (noisy " << format_double(mean_squared_error(clean, noisy))
        << ") " << denoiser_tuning(spec) << '\n';
    results.push_back({{"denoiser", name}, {"tuning", denoiser_tuning(spec)}, {"mse", mse}});
    if (!c.output_path.empty()) {
      std::ostringstream os;
      write_matrix_csv(os, est);
      const std::string path = c.denoisers.size() == 1 ? c.output_path : c.output_path + "." + name;
      write_text(path, os.str());
    }
  }
  if (!c.output_path.empty()) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json meta = metadata(c, wall);
    meta["results"] = results;
    write_text(sidecar_path(c.output_path), meta.dump(2) + "\n");
  }
  return 0;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const EdgeContour contour = contour_of(c);
  std::vector<SweepRow> rows;
  json tuning = json::array();
  for (const auto& name : c.denoisers) {
    FamilySpec fam{parse_family(name), c.epsilon, c.window};
    for (const auto& e : rate_sweep(fam, contour, c.n_list, c.sigma, c.trials, c.master_seed)) {
      rows.push_back({e, slope_ref(fam.family)});
      tuning.push_back({{"denoiser", name}, {"n", e.n}, {"tuning", e.tuning}});
    }
  }
  std::ostringstream csv;
  write_csv(csv, rows);
  const std::string output = c.output_path.empty() ? "sweep.csv" : c.output_path;
  write_text(output, csv.str());
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json meta = metadata(c, wall);
  meta["tuning"] = tuning;
  write_text(sidecar_path(output), meta.dump(2) + "\n");
  if (c.emit_plot) {
    std::ostringstream gp;
    write_gnuplot(gp, output, rows, output + ".png");
    write_text(output + ".gp", gp.str());
  }
  out << csv.str();
  return 0;
}

int cmd_fit(const RunConfig& c, std::ostream& out) {
  std::ifstream f(c.input_path);
  if (!f) throw InvalidArgument("cannot open '" + c.input_path + "'");
  const auto rows = read_csv(f);
  std::map<std::string, std::vector<RiskEstimate>> groups;
  std::map<std::string, double> refs;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (!groups.count(r.estimate.denoiser)) order.push_back(r.estimate.denoiser);
    groups[r.estimate.denoiser].push_back(r.estimate);
    refs[r.estimate.denoiser] = r.slope_ref;
  }
  if (order.empty()) throw DegenerateFit("fit: no rows in '" + c.input_path + "'");
  for (const auto& name : order) {
    const RateFit fit = fit_rate(groups[name], c.weighted);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: slope %.4f +/- %.4f (reference %.4f, %zu points)", name.c_str(), fit.slope,
                  fit.slope_stderr, refs[name], fit.n_values.size());
    out << buf << '\n';
  }
  return 0;
}

int cmd_diagnose(const RunConfig& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const int n = c.n_list.front();
  NlmParams p = default_params(n, c.epsilon, c.sigma);
  p.oracle = parse_oracle(c.oracle);
  if (c.delta) p.delta = *c.delta;
  if (c.t) p.t = *c.t;
  p.window = c.window;
  const EdgeDiagnostics d = edge_diagnostics(contour_of(c), n, c.sigma, p, c.trials, c.master_seed);
  out << "fraction_passing_J " << format_double(d.fraction_passing_J) << " +/- " << format_double(d.fraction_stderr)
      << '\n'
      << "mean_edge_estimate " << format_double(d.mean_edge_estimate) << " +/- "
      << format_double(d.estimate_stderr) << '\n'
      << "p0_reference " << format_double(d.p0_reference) << '\n'
      << "trend_bound " << format_double(d.trend_bound) << '\n'
      << "delta " << p.delta << " t " << format_double(p.t) << " oracle " << to_string(p.oracle) << '\n';
  if (!c.output_path.empty()) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json meta = metadata(c, wall);
    meta["diagnostics"] = {{"fraction_passing_J", d.fraction_passing_J},
                           {"fraction_stderr", d.fraction_stderr},
                           {"mean_edge_estimate", d.mean_edge_estimate},
                           {"estimate_stderr", d.estimate_stderr},
                           {"p0_reference", d.p0_reference},
                           {"trend_bound", d.trend_bound},
                           {"delta", p.delta},
                           {"t", p.t},
                           {"oracle", to_string(p.oracle)}};
    write_text(c.output_path, meta.dump(2) + "\n");
  }
  return 0;
}

int cmd_selftest(std::ostream& out) {
  struct Golden {
    const char* name;
    double value;
    double expected;
    double tol = 1e-6;
  };
  std::vector<Golden> g;
  g.push_back({"halfplane_dft(4)(0,1) magnitude", std::abs(halfplane_dft(4)(0, 1)), std::numbers::sqrt2});
  g.push_back({"yf_weight_mean(1,1,1)", yf_weight_mean(1.0, 1.0, 1), std::exp(-0.25) / std::numbers::sqrt2});
  g.push_back({"p0_reference(1)", p0_reference(1.0), 0.1198750305});
  g.push_back({"g_variance(1,2)", g_variance(1.0, 2), 2.56});
  g.push_back({"chisq upper bound(10,1)", chisq_upper_bound(10, 1.0), 0.2156143040});
  g.push_back({"gaussian_sq_mgf(0.25,1)", gaussian_sq_mgf(0.25, 1.0), std::numbers::sqrt2});
  g.push_back({"linear_bias_floor(64,1)", linear_bias_floor(64, 1.0), 1.5545e-3});
  {
    ImageGrid img(8);
    auto v = img.values();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = counter_uniform(1, 99, k);
    const ImageGrid back = haar2_inverse(haar2_forward(img));
    double worst = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) worst = std::max(worst, std::abs(back.values()[k] - v[k]));
    g.push_back({"haar round-trip max error", worst, 0.0, 1e-12});
  }
  bool ok = true;
  for (const auto& e : g) {
    const bool pass = std::abs(e.value - e.expected) <= e.tol;
    ok = ok && pass;
    out << (pass ? "PASS " : "FAIL ") << e.name << " = " << format_double(e.value) << " (expected "
        << format_double(e.expected) << ")\n";
  }
  return ok ? 0 : 2;
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::render: return "render";
    case Command::denoise: return "denoise";
    case Command::sweep: return "sweep";
    case Command::fit: return "fit";
    case Command::diagnose: return "diagnose";
    case Command::selftest: return "selftest";
  }
  return "unknown";
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  CLI::App app{"Horizon-class denoising and Monte Carlo risk tools", "horizon-risk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HORIZON_VERSION);

  std::string n_text;
  std::string denoiser_text;
  std::optional<int> window;
  std::optional<int> delta;
  std::optional<double> t;

  auto add_contour = [&](CLI::App* s) {
    s->add_option("--contour", c.contour, "const:a | poly:c0,c1,... | sin:amp,freq,offset[,phase]");
    s->add_option("--alpha", c.alpha, "declared Hoelder exponent");
    s->add_option("--holder-c", c.holder_c, "declared Hoelder constant");
  };
  auto add_noise_opts = [&](CLI::App* s) {
    s->add_option("--sigma", c.sigma, "noise standard deviation");
    s->add_option("--seed", c.master_seed, "master seed");
  };

  auto* render_cmd = app.add_subcommand("render", "render a contour as an n x n matrix CSV");
  add_contour(render_cmd);
  render_cmd->add_option("--n", n_text, "image size")->required();
  render_cmd->add_option("--output", c.output_path, "output path (stdout when empty)");

  auto* denoise_cmd = app.add_subcommand("denoise", "denoise one noisy render");
  add_contour(denoise_cmd);
  add_noise_opts(denoise_cmd);
  denoise_cmd->add_option("--n", n_text, "image size")->required();
  denoise_cmd->add_option("--denoiser", denoiser_text, "comma-separated denoiser families")->required();
  denoise_cmd->add_option("--epsilon", c.epsilon, "nlm rate parameter");
  denoise_cmd->add_option("--halfwidth", c.halfwidth, "box halfwidth");
  denoise_cmd->add_option("--delta", delta, "yf window or nlm patch half-size");
  denoise_cmd->add_option("--t", t, "nlm threshold slack");
  denoise_cmd->add_option("--window", window, "nlm search window radius");
  denoise_cmd->add_option("--output", c.output_path, "matrix CSV of the estimate");

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo risk over a list of sizes");
  add_contour(sweep_cmd);
  add_noise_opts(sweep_cmd);
  sweep_cmd->add_option("--n", n_text, "comma-separated sizes")->required();
  sweep_cmd->add_option("--denoiser", denoiser_text, "comma-separated denoiser families")->required();
  sweep_cmd->add_option("--trials", c.trials, "trials per size");
  sweep_cmd->add_option("--epsilon", c.epsilon, "nlm rate parameter");
  sweep_cmd->add_option("--window", window, "nlm search window radius");
  sweep_cmd->add_option("--output", c.output_path, "CSV path (default sweep.csv)");
  sweep_cmd->add_flag("--plot", c.emit_plot, "also write a gnuplot script");
  sweep_cmd->add_flag("--allow-large-nlm", c.allow_large_nlm, "permit nlm sizes above 256");

  auto* fit_cmd = app.add_subcommand("fit", "fit log-log slopes to a sweep CSV");
  fit_cmd->add_option("--input", c.input_path, "sweep CSV")->required();
  fit_cmd->add_flag("--weighted", c.weighted, "weight points by (risk / stderr)^2");

  auto* diag_cmd = app.add_subcommand("diagnose", "edge-pixel diagnostics for hard-threshold nlm");
  add_contour(diag_cmd);
  add_noise_opts(diag_cmd);
  diag_cmd->add_option("--n", n_text, "image size (even)")->required();
  diag_cmd->add_option("--trials", c.trials, "trials");
  diag_cmd->add_option("--epsilon", c.epsilon, "nlm rate parameter");
  diag_cmd->add_option("--oracle", c.oracle, "none | semi");
  diag_cmd->add_option("--delta", delta, "patch half-size override");
  diag_cmd->add_option("--t", t, "threshold slack override");
  diag_cmd->add_option("--output", c.output_path, "JSON result path");

  auto* self_cmd = app.add_subcommand("selftest", "closed-form golden checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForVersion& e) {
    out << HORIZON_VERSION << '\n';
    return std::nullopt;
  } catch (const CLI::Error& e) {
    throw InvalidArgument(e.what());
  }

  if (render_cmd->parsed()) c.command = Command::render;
  if (denoise_cmd->parsed()) c.command = Command::denoise;
  if (sweep_cmd->parsed()) c.command = Command::sweep;
  if (fit_cmd->parsed()) c.command = Command::fit;
  if (diag_cmd->parsed()) c.command = Command::diagnose;
  if (self_cmd->parsed()) c.command = Command::selftest;
  c.window = window;
  c.delta = delta;
  c.t = t;

  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) {
      if (!p.empty()) parts.push_back(p);
    }
    return parts;
  };
  if (!n_text.empty()) {
    c.n_list.clear();
    for (const auto& p : split(n_text)) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(p, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != p.size() || used == 0) throw InvalidArgument("--n: not an integer: '" + p + "'");
      c.n_list.push_back(v);
    }
  }
  if (!denoiser_text.empty()) c.denoisers = split(denoiser_text);
  return c;
}

void validate(const RunConfig& c) {
  const bool needs_n = c.command != Command::fit && c.command != Command::selftest;
  const bool needs_sigma = c.command == Command::denoise || c.command == Command::sweep || c.command == Command::diagnose;
  if (needs_n) {
    if (c.n_list.empty()) throw InvalidArgument("--n is required");
    for (int n : c.n_list) {
      if (n < 2) throw InvalidArgument("--n values must be >= 2");
    }
    if (c.command != Command::sweep && c.n_list.size() != 1) {
      throw InvalidArgument(to_string(c.command) + " takes a single --n value");
    }
    contour_of(c);
  }
  if (needs_sigma && !(c.sigma > 0.0)) throw InvalidArgument("--sigma must be > 0");
  if (!(c.epsilon > 0.0)) throw InvalidArgument("--epsilon must be > 0");
  if (c.window && *c.window < 1) throw WindowTooSmall("--window must be >= 1");
  if (c.delta && *c.delta < 1) throw InvalidArgument("--delta must be >= 1");
  if (c.t && !(*c.t > 0.0)) throw InvalidArgument("--t must be > 0");

  if (c.command == Command::sweep || c.command == Command::denoise) {
    if (c.denoisers.empty()) throw InvalidArgument("--denoiser is required");
    for (const auto& name : c.denoisers) {
      const Family f = parse_family(name);
      for (int n : c.n_list) {
        if (f == Family::wavelet && !is_power_of_two(n)) {
          throw NotPowerOfTwo("wavelet needs power-of-two n, got " + std::to_string(n));
        }
        if (is_nlm(f)) {
          if (n < 3) throw InvalidArgument("nlm needs n >= 3");
          const int d = c.delta.value_or(f == Family::nlm_tapered ? tapered_default_params(n, c.sigma).delta
                                                                   : default_params(n, c.epsilon, c.sigma).delta);
          if (2 * d + 1 > n) {
            throw DeltaTooLarge("nlm patch width " + std::to_string(2 * d + 1) + " exceeds n=" + std::to_string(n));
          }
          if (c.command == Command::sweep && n > kNlmDefaultMaxN && !c.allow_large_nlm) {
            throw InvalidArgument("nlm sweeps stop at n=256 by default; pass --allow-large-nlm for larger sizes");
          }
        }
        if (c.command == Command::denoise) {
          if (f == Family::box && (c.halfwidth < 0 || 2 * c.halfwidth + 1 > n)) {
            throw KernelTooLarge("--halfwidth does not fit n=" + std::to_string(n));
          }
          if (f == Family::yaroslavsky && 2 * c.delta.value_or(1) + 1 > n) {
            throw DeltaTooLarge("--delta does not fit n=" + std::to_string(n));
          }
        }
      }
    }
  }
  if (c.command == Command::sweep) {
    if (c.n_list.size() < 3) throw InvalidArgument("sweep needs at least three --n values");
    for (std::size_t k = 1; k < c.n_list.size(); ++k) {
      if (c.n_list[k] <= c.n_list[k - 1]) throw InvalidArgument("--n values must be strictly increasing");
    }
    if (c.trials < 2) throw InvalidArgument("--trials must be >= 2");
  }
  if (c.command == Command::diagnose) {
    const int n = c.n_list.front();
    if (n % 2 != 0) throw OddN("diagnose needs even n");
    if (n < 3) throw InvalidArgument("diagnose needs n >= 4");
    const OracleLevel o = parse_oracle(c.oracle);
    if (o == OracleLevel::full) throw InvalidArgument("diagnose supports --oracle none or semi");
    if (c.trials < 2) throw InvalidArgument("--trials must be >= 2");
    const int d = c.delta.value_or(default_params(n, c.epsilon, c.sigma).delta);
    if (2 * d + 1 > n) throw DeltaTooLarge("patch width exceeds n");
  }
  if (c.command == Command::fit && c.input_path.empty()) throw InvalidArgument("--input is required");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  }
  try {
    switch (config.command) {
      case Command::render: return cmd_render(config, out);
      case Command::denoise: return cmd_denoise(config, out);
      case Command::sweep: return cmd_sweep(config, out);
      case Command::fit: return cmd_fit(config, out);
      case Command::diagnose: return cmd_diagnose(config, out);
      case Command::selftest: return cmd_selftest(out);
    }
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_args(argc, argv, out);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  }
  if (!config) return 0;
  return run(*config, out, err);
}

}  // namespace horizon
