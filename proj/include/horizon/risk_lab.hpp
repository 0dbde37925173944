#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "horizon/horizon_model.hpp"
#include "horizon/image.hpp"
#include "horizon/linear_filters.hpp"
#include "horizon/neighborhood_filters.hpp"
#include "horizon/nlm.hpp"

namespace horizon {

struct IdentityDenoiser {};
struct GlobalMeanDenoiser {};
struct BoxDenoiser {
  int halfwidth = 1;
};
struct KernelDenoiser {
  Kernel kernel = identity_kernel();
};
struct YaroslavskyDenoiser {
  YfParams params;
};
struct NlmDenoiser {
  NlmParams params;
};
struct WaveletDenoiser {
  std::optional<double> theta;  // universal threshold when empty
};

using DenoiserSpec = std::variant<IdentityDenoiser, GlobalMeanDenoiser, BoxDenoiser, KernelDenoiser,
                                  YaroslavskyDenoiser, NlmDenoiser, WaveletDenoiser>;

// Short tag: identity, mean, box, kernel, yf, nlm, wavelet.
std::string denoiser_tag(const DenoiserSpec& spec);
// Tuning parameters as "key=value" pairs separated by spaces.
std::string denoiser_tuning(const DenoiserSpec& spec);

// Runs the denoiser. `clean` is passed to oracle variants only.
ImageGrid apply_denoiser(const DenoiserSpec& spec, const ImageGrid& noisy, const ImageGrid& clean,
                         double sigma);

struct RiskEstimate {
  double mean_risk = 0.0;
  double standard_error = 0.0;
  double bias_sq = 0.0;
  double variance = 0.0;
  int trials = 0;
  int n = 0;
  double sigma = 0.0;
  std::string denoiser;
  std::string tuning;
  std::uint64_t master_seed = 0;
};

// Monte Carlo risk over `trials` noise draws of the rendered contour.
// Plug-in decomposition: with f_bar the across-trial mean estimate,
//   bias_sq  = (1/n^2) sum (x - f_bar)^2
//   variance = (1/n^2) mean_k sum (f_k - f_bar)^2
// so bias_sq + variance equals mean_risk up to rounding. Trials run on
// worker_count() threads and are reduced in trial order, so the result does
// not depend on the thread count.
RiskEstimate empirical_risk(const DenoiserSpec& denoiser, const EdgeContour& contour, int n, double sigma,
                            int trials, std::uint64_t master_seed);
RiskEstimate empirical_risk(const DenoiserSpec& denoiser, const ImageGrid& clean, double sigma, int trials,
                            std::uint64_t master_seed);

enum class Family { identity, box, yaroslavsky, nlm, nlm_semi, nlm_tapered, wavelet };
std::string to_string(Family family);
Family parse_family(const std::string& name);

// Theoretical risk exponent for the family: -2/3 box and yf, -1 nlm and
// wavelet, 0 identity.
double slope_ref(Family family);
inline constexpr double kMinimaxSlope = -4.0 / 3.0;

struct FamilySpec {
  Family family = Family::box;
  double epsilon = 0.1;        // nlm defaults
  std::optional<int> window;   // nlm search window; full search when empty
};

// Per-n parameter rules:
//   box:          halfwidth minimizing the risk over 0..ceil(2 n^{1/3}), same seed
//   yaroslavsky:  semi-oracle, tau = sigma, Delta minimizing the risk over 1..ceil(2 n^{1/3})
//   nlm:          default_params(n, epsilon, sigma)
//   nlm_semi:     default_params with the semi-oracle
//   nlm_tapered:  tapered_default_params(n, sigma)
//   wavelet:      universal threshold
RiskEstimate family_risk(const FamilySpec& family, const EdgeContour& contour, int n, double sigma, int trials,
                         std::uint64_t master_seed);

// One family_risk per n. n_list must be strictly increasing with at least
// three entries.
std::vector<RiskEstimate> rate_sweep(const FamilySpec& family, const EdgeContour& contour,
                                     const std::vector<int>& n_list, double sigma, int trials,
                                     std::uint64_t master_seed);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::vector<double> n_values;
  std::vector<double> risks;
};

// Least squares of ln R on ln n. Unweighted by default; with `weighted`,
// each point gets weight (R / stderr)^2, the inverse delta-method variance
// of ln R. Throws DegenerateFit (fewer than 3 points or a single n value),
// DomainError (a non-positive risk or n).
RateFit fit_rate(const std::vector<double>& n_values, const std::vector<double>& risks,
                 const std::vector<double>& stderrs = {}, bool weighted = false);
RateFit fit_rate(const std::vector<RiskEstimate>& table, bool weighted = false);

struct EdgeDiagnostics {
  double fraction_passing_J = 0.0;  // share of below-edge row pixels with weight 1
  double fraction_stderr = 0.0;
  double mean_edge_estimate = 0.0;  // NLM output at the above-edge row
  double estimate_stderr = 0.0;
  double p0_reference = 0.0;
  double trend_bound = 0.0;  // phi / (1 + 2 phi) at phi = fraction_passing_J
  int n = 0;
  double sigma = 0.0;
  int trials = 0;
  NlmParams params;
};

// For each trial and column i, takes the reference pixel on the row just
// above the edge and measures (a) the fraction of pixels on the row just
// below the edge whose hard weight is 1 and (b) the NLM estimate at the
// reference pixel. Both are averaged over columns, then over trials.
// Requires even n, hard weights and the none or semi oracle level.
EdgeDiagnostics edge_diagnostics(const EdgeContour& contour, int n, double sigma, const NlmParams& params,
                                 int trials, std::uint64_t master_seed);

// Phi(-1 / (sigma^2 sqrt 2)) / 2.
double p0_reference(double sigma);
// 2 sigma^4 + (8 sigma^2 delta - 2 sigma^4) / (2 delta + 1)^2.
double g_variance(double sigma, int delta);

// Tail bounds for (1/n) sum Z_i^2 - 1 with Z_i standard normal:
//   upper: P(. > t)  <= exp(-n/2 (t - ln(1 + t)))
//   lower: P(. < -t) <= exp(-n/2 (-t - ln(1 - t)))   (0 < t < 1)
struct ChiSqBounds {
  double upper;
  std::optional<double> lower;  // empty for t >= 1
};
ChiSqBounds chisq_tail_bounds(int n, double t);
double chisq_upper_bound(int n, double t);
// Throws DomainError for t >= 1.
double chisq_lower_bound(int n, double t);

// E exp(lambda Z^2) for Z ~ N(0, sigma^2): 1 / sqrt(1 - 2 lambda sigma^2).
// Throws DomainError for lambda >= 1 / (2 sigma^2).
double gaussian_sq_mgf(double lambda, double sigma);

}  // namespace horizon
