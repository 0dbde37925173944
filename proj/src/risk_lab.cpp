#include "horizon/risk_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>
#include <type_traits>

#include "horizon/noise.hpp"
#include "horizon/parallel.hpp"
#include "horizon/wavelet.hpp"

namespace horizon {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

int tuning_grid_max(int n) { return static_cast<int>(std::ceil(2.0 * std::cbrt(static_cast<double>(n)))); }

}  // namespace

std::string denoiser_tag(const DenoiserSpec& spec) {
  return std::visit(overloaded{
                        [](const IdentityDenoiser&) { return std::string("identity"); },
                        [](const GlobalMeanDenoiser&) { return std::string("mean"); },
                        [](const BoxDenoiser&) { return std::string("box"); },
                        [](const KernelDenoiser&) { return std::string("kernel"); },
                        [](const YaroslavskyDenoiser&) { return std::string("yf"); },
                        [](const NlmDenoiser&) { return std::string("nlm"); },
                        [](const WaveletDenoiser&) { return std::string("wavelet"); },
                    },
                    spec);
}

std::string denoiser_tuning(const DenoiserSpec& spec) {
  return std::visit(
      overloaded{
          [](const IdentityDenoiser&) { return std::string(); },
          [](const GlobalMeanDenoiser&) { return std::string(); },
          [](const BoxDenoiser& d) { return "halfwidth=" + std::to_string(d.halfwidth); },
          [](const KernelDenoiser& d) { return "halfwidth=" + std::to_string(d.kernel.halfwidth()); },
          [](const YaroslavskyDenoiser& d) {
            return "delta=" + std::to_string(d.params.delta) + " tau=" + format_number(d.params.tau) +
                   " oracle=" + (d.params.oracle ? "semi" : "none");
          },
          [](const NlmDenoiser& d) {
            const auto& p = d.params;
            std::string s = "delta=" + std::to_string(p.delta) + " weights=" + to_string(p.weight_kind) +
                            " oracle=" + to_string(p.oracle);
            if (p.weight_kind == WeightKind::hard) {
              s += " t=" + format_number(p.t);
            } else {
              s += " alpha=" + format_number(p.taper_alpha) + " h2=" + format_number(p.taper_bandwidth);
            }
            if (p.window) s += " window=" + std::to_string(*p.window);
            return s;
          },
          [](const WaveletDenoiser& d) {
            return d.theta ? "theta=" + format_number(*d.theta) : std::string("theta=universal");
          },
      },
      spec);
}

ImageGrid apply_denoiser(const DenoiserSpec& spec, const ImageGrid& noisy, const ImageGrid& clean, double sigma) {
  return std::visit(
      overloaded{
          [&](const IdentityDenoiser&) { return noisy; },
          [&](const GlobalMeanDenoiser&) { return ImageGrid(noisy.n(), noisy.mean()); },
          [&](const BoxDenoiser& d) { return box_filter(noisy, d.halfwidth); },
          [&](const KernelDenoiser& d) { return convolve_periodic(noisy, d.kernel); },
          [&](const YaroslavskyDenoiser& d) {
            return yaroslavsky(noisy, d.params.oracle ? std::optional<ImageGrid>(clean) : std::nullopt, d.params);
          },
          [&](const NlmDenoiser& d) {
            return nlm_denoise(noisy,
                               d.params.oracle != OracleLevel::none ? std::optional<ImageGrid>(clean)
                                                                    : std::nullopt,
                               d.params);
          },
          [&](const WaveletDenoiser& d) {
            if (!d.theta) return wavelet_denoise(noisy, sigma);
            return haar2_inverse(hard_threshold(haar2_forward(noisy), *d.theta));
          },
      },
      spec);
}

RiskEstimate empirical_risk(const DenoiserSpec& denoiser, const EdgeContour& contour, int n, double sigma,
                            int trials, std::uint64_t master_seed) {
  return empirical_risk(denoiser, render(contour, n), sigma, trials, master_seed);
}

RiskEstimate empirical_risk(const DenoiserSpec& denoiser, const ImageGrid& clean, double sigma, int trials,
                            std::uint64_t master_seed) {
  if (trials < 2) throw InvalidArgument("empirical_risk: trials must be >= 2");
  if (!(sigma > 0.0)) throw InvalidArgument("empirical_risk: sigma must be > 0");
  const int n = clean.n();
  const std::size_t count = clean.size();
  const auto x = clean.values();

  // Per-pixel Welford accumulators of the estimates.
  std::vector<double> mean(count, 0.0), m2(count, 0.0);
  std::vector<double> trial_risk;
  trial_risk.reserve(trials);

  const int workers = worker_count();
  std::vector<ImageGrid> batch;
  for (int start = 0; start < trials; start += workers) {
    const int size = std::min(workers, trials - start);
    batch.assign(size, ImageGrid());
    parallel_for(size, workers, [&](std::size_t k) {
      const NoiseSpec noise{sigma, master_seed, static_cast<std::uint64_t>(start) + k};
      batch[k] = apply_denoiser(denoiser, add_noise(clean, noise), clean, sigma);
    });
    for (int k = 0; k < size; ++k) {
      const auto f = batch[k].values();
      const double seen = start + k + 1.0;
      double sq = 0.0;
      for (std::size_t p = 0; p < count; ++p) {
        const double e = x[p] - f[p];
        sq += e * e;
        const double d = f[p] - mean[p];
        mean[p] += d / seen;
        m2[p] += d * (f[p] - mean[p]);
      }
      trial_risk.push_back(sq / static_cast<double>(count));
    }
  }

  RiskEstimate r;
  r.trials = trials;
  r.n = n;
  r.sigma = sigma;
  r.denoiser = denoiser_tag(denoiser);
  r.tuning = denoiser_tuning(denoiser);
  r.master_seed = master_seed;

  double sum = 0.0;
  for (double v : trial_risk) sum += v;
  r.mean_risk = sum / trials;
  double ss = 0.0;
  for (double v : trial_risk) ss += (v - r.mean_risk) * (v - r.mean_risk);
  r.standard_error = std::sqrt(ss / (trials - 1.0) / trials);

  double bias = 0.0, var = 0.0;
  for (std::size_t p = 0; p < count; ++p) {
    const double e = x[p] - mean[p];
    bias += e * e;
    var += m2[p];
  }
  r.bias_sq = bias / static_cast<double>(count);
  r.variance = var / trials / static_cast<double>(count);
  return r;
}

std::string to_string(Family family) {
  switch (family) {
    case Family::identity: return "identity";
    case Family::box: return "box";
    case Family::yaroslavsky: return "yf";
    case Family::nlm: return "nlm";
    case Family::nlm_semi: return "nlm-semi";
    case Family::nlm_tapered: return "nlm-tapered";
    case Family::wavelet: return "wavelet";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::identity, Family::box, Family::yaroslavsky, Family::nlm, Family::nlm_semi,
                   Family::nlm_tapered, Family::wavelet}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidArgument("unknown denoiser family '" + name +
                        "' (expected identity, box, yf, nlm, nlm-semi, nlm-tapered, wavelet)");
}

double slope_ref(Family family) {
  switch (family) {
    case Family::identity: return 0.0;
    case Family::box:
    case Family::yaroslavsky: return -2.0 / 3.0;
    case Family::nlm:
    case Family::nlm_semi:
    case Family::nlm_tapered:
    case Family::wavelet: return -1.0;
  }
  return 0.0;
}

RiskEstimate family_risk(const FamilySpec& family, const EdgeContour& contour, int n, double sigma, int trials,
                         std::uint64_t master_seed) {
  const ImageGrid clean = render(contour, n);
  auto best_of = [&](int lo, auto make) {
    std::optional<RiskEstimate> best;
    const int hi = std::min(tuning_grid_max(n), (n - 1) / 2);
    for (int k = lo; k <= hi; ++k) {
      RiskEstimate r = empirical_risk(make(k), clean, sigma, trials, master_seed);
      if (!best || r.mean_risk < best->mean_risk) best = std::move(r);
    }
    return *best;
  };
  RiskEstimate r;
  switch (family.family) {
    case Family::identity:
      r = empirical_risk(IdentityDenoiser{}, clean, sigma, trials, master_seed);
      break;
    case Family::box:
      r = best_of(0, [](int k) { return DenoiserSpec(BoxDenoiser{k}); });
      break;
    case Family::yaroslavsky:
      r = best_of(1, [&](int k) { return DenoiserSpec(YaroslavskyDenoiser{YfParams{k, sigma, true}}); });
      break;
    case Family::nlm:
    case Family::nlm_semi: {
      NlmParams p = default_params(n, family.epsilon, sigma);
      if (family.family == Family::nlm_semi) p.oracle = OracleLevel::semi;
      p.window = family.window;
      r = empirical_risk(NlmDenoiser{p}, clean, sigma, trials, master_seed);
      break;
    }
    case Family::nlm_tapered: {
      NlmParams p = tapered_default_params(n, sigma);
      p.window = family.window;
      r = empirical_risk(NlmDenoiser{p}, clean, sigma, trials, master_seed);
      break;
    }
    case Family::wavelet:
      r = empirical_risk(WaveletDenoiser{}, clean, sigma, trials, master_seed);
      break;
  }
  r.denoiser = to_string(family.family);
  return r;
}

std::vector<RiskEstimate> rate_sweep(const FamilySpec& family, const EdgeContour& contour,
                                     const std::vector<int>& n_list, double sigma, int trials,
                                     std::uint64_t master_seed) {
  if (n_list.size() < 3) throw InvalidArgument("rate_sweep: need at least three n values");
  for (std::size_t k = 1; k < n_list.size(); ++k) {
    if (n_list[k] <= n_list[k - 1]) throw InvalidArgument("rate_sweep: n values must be strictly increasing");
  }
  std::vector<RiskEstimate> table;
  table.reserve(n_list.size());
  for (int n : n_list) table.push_back(family_risk(family, contour, n, sigma, trials, master_seed));
  return table;
}

RateFit fit_rate(const std::vector<double>& n_values, const std::vector<double>& risks,
                 const std::vector<double>& stderrs, bool weighted) {
  const std::size_t k = n_values.size();
  if (risks.size() != k) throw InvalidArgument("fit_rate: n and risk columns differ in length");
  if (k < 3) throw DegenerateFit("fit_rate: need at least three points, got " + std::to_string(k));
  if (weighted && stderrs.size() != k) throw InvalidArgument("fit_rate: weighted fit needs one stderr per point");
  std::vector<double> u(k), v(k), w(k, 1.0);
  for (std::size_t p = 0; p < k; ++p) {
    if (!(n_values[p] > 0.0) || !(risks[p] > 0.0)) throw DomainError("fit_rate: n and risk must be > 0");
    u[p] = std::log(n_values[p]);
    v[p] = std::log(risks[p]);
    if (weighted) {
      if (!(stderrs[p] > 0.0)) throw DomainError("fit_rate: weighted fit needs stderr > 0");
      w[p] = (risks[p] / stderrs[p]) * (risks[p] / stderrs[p]);
    }
  }
  double sw = 0.0, su = 0.0, sv = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    sw += w[p];
    su += w[p] * u[p];
    sv += w[p] * v[p];
  }
  const double ubar = su / sw, vbar = sv / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    sxx += w[p] * (u[p] - ubar) * (u[p] - ubar);
    sxy += w[p] * (u[p] - ubar) * (v[p] - vbar);
  }
  if (!(sxx > 0.0)) throw DegenerateFit("fit_rate: all n values are equal");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = vbar - fit.slope * ubar;
  double ssr = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    const double e = v[p] - fit.intercept - fit.slope * u[p];
    ssr += w[p] * e * e;
  }
  fit.slope_stderr = std::sqrt(ssr / (static_cast<double>(k) - 2.0) / sxx);
  fit.n_values = n_values;
  fit.risks = risks;
  return fit;
}

RateFit fit_rate(const std::vector<RiskEstimate>& table, bool weighted) {
  std::vector<double> n, r, s;
  for (const auto& e : table) {
    n.push_back(e.n);
    r.push_back(e.mean_risk);
    s.push_back(e.standard_error);
  }
  return fit_rate(n, r, s, weighted);
}

EdgeDiagnostics edge_diagnostics(const EdgeContour& contour, int n, double sigma, const NlmParams& params,
                                 int trials, std::uint64_t master_seed) {
  if (n < 2 || n % 2 != 0) throw OddN("edge_diagnostics: n must be even, got " + std::to_string(n));
  if (trials < 2) throw InvalidArgument("edge_diagnostics: trials must be >= 2");
  if (params.weight_kind != WeightKind::hard) throw InvalidArgument("edge_diagnostics: hard weights required");
  if (params.oracle == OracleLevel::full) throw InvalidArgument("edge_diagnostics: oracle must be none or semi");
  NlmParams p = params;
  p.sigma = sigma;
  const ImageGrid clean = render(contour, n);
  const auto rows = edge_rows(clean);
  const std::optional<ImageGrid> oracle =
      p.oracle == OracleLevel::semi ? std::optional<ImageGrid>(clean) : std::nullopt;

  std::vector<double> fraction(trials), estimate(trials);
  parallel_for(trials, worker_count(), [&](std::size_t k) {
    const ImageGrid noisy = add_noise(clean, NoiseSpec{sigma, master_seed, k});
    double passed = 0.0, est = 0.0;
    for (int i = 0; i < n; ++i) {
      const int above = rows[i].above;
      for (int m = 0; m < n; ++m) passed += nlm_pair_weight(noisy, oracle, p, i, above, m, rows[m].below);
      est += nlm_estimate_at(noisy, oracle, p, i, above);
    }
    fraction[k] = passed / (static_cast<double>(n) * n);
    estimate[k] = est / n;
  });

  auto mean_se = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    const double m = s / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::pair{m, std::sqrt(ss / (v.size() - 1.0) / v.size())};
  };
  EdgeDiagnostics d;
  std::tie(d.fraction_passing_J, d.fraction_stderr) = mean_se(fraction);
  std::tie(d.mean_edge_estimate, d.estimate_stderr) = mean_se(estimate);
  d.p0_reference = p0_reference(sigma);
  d.trend_bound = d.fraction_passing_J / (1.0 + 2.0 * d.fraction_passing_J);
  d.n = n;
  d.sigma = sigma;
  d.trials = trials;
  d.params = p;
  return d;
}

double p0_reference(double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("p0_reference: sigma must be > 0");
  // Phi(-a) = erfc(a / sqrt 2) / 2 with a = 1 / (sigma^2 sqrt 2).
  return std::erfc(1.0 / (2.0 * sigma * sigma)) / 4.0;
}

double g_variance(double sigma, int delta) {
  if (!(sigma > 0.0)) throw InvalidArgument("g_variance: sigma must be > 0");
  if (delta < 1) throw InvalidArgument("g_variance: delta must be >= 1");
  const double s2 = sigma * sigma, s4 = s2 * s2;
  const double w = 2.0 * delta + 1.0;
  return 2.0 * s4 + (8.0 * s2 * delta - 2.0 * s4) / (w * w);
}

double chisq_upper_bound(int n, double t) {
  if (n < 1) throw InvalidArgument("chisq_upper_bound: n must be >= 1");
  if (!(t > 0.0)) throw DomainError("chisq_upper_bound: t must be > 0");
  return std::exp(-0.5 * n * (t - std::log1p(t)));
}

double chisq_lower_bound(int n, double t) {
  if (n < 1) throw InvalidArgument("chisq_lower_bound: n must be >= 1");
  if (!(t > 0.0) || !(t < 1.0)) throw DomainError("chisq_lower_bound: t must be in (0, 1)");
  return std::exp(0.5 * n * (t + std::log1p(-t)));
}

ChiSqBounds chisq_tail_bounds(int n, double t) {
  ChiSqBounds b{chisq_upper_bound(n, t), std::nullopt};
  if (t < 1.0) b.lower = chisq_lower_bound(n, t);
  return b;
}

double gaussian_sq_mgf(double lambda, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian_sq_mgf: sigma must be > 0");
  const double arg = 1.0 - 2.0 * lambda * sigma * sigma;
  if (!(arg > 0.0)) throw DomainError("gaussian_sq_mgf: lambda must be < 1/(2 sigma^2)");
  return 1.0 / std::sqrt(arg);
}

}  // namespace horizon
