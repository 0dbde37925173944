#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "horizon/image.hpp"

namespace horizon {

enum class WeightKind { hard, tapered };
enum class OracleLevel { none, semi, full };

std::string to_string(WeightKind kind);
std::string to_string(OracleLevel level);

struct NlmParams {
  int delta = 1;          // patch half-size
  double t = 0.1;         // threshold slack added to the noise floor
  double sigma = 1.0;     // noise standard deviation
  WeightKind weight_kind = WeightKind::hard;
  OracleLevel oracle = OracleLevel::none;
  // Search set: the whole image when empty, otherwise offsets with
  // |dm|, |dl| <= *window.
  std::optional<int> window;
  double epsilon = 0.1;          // rate parameter recorded by default_params
  double taper_alpha = 1.0;      // upper bound on tapered weights
  double taper_bandwidth = 1.0;  // h^2 of the tapered kernel
};

// rho^2 = (2 delta + 1)^2 - 1, the number of non-centre patch offsets.
int rho_sq(int delta);

// Mean squared difference over the non-centre offsets of the periodic
// (2 delta + 1)^2 patches around ref(i, j) and cand(m, l):
//   (1/rho^2) [ sum_{p,q} (ref(i+p, j+q) - cand(m+p, l+q))^2 - (ref(i,j) - cand(m,l))^2 ].
// Direct O(delta^2) evaluation.
double patch_distance(const ImageGrid& ref, const ImageGrid& cand, int i, int j, int m, int l,
                      int delta);

// Expected distance of pure noise for the oracle level: 2 sigma^2 (both
// patches noisy), sigma^2 (semi-oracle), 0 (full oracle).
double noise_floor(const NlmParams& params);

// Weight for a distance under the parameters:
//   hard:    1 if d2 <= noise_floor + t, else 0
//   tapered: min(alpha, exp(-max(d2 - noise_floor, 0) / h^2))
double weight_from_distance(double d2, const NlmParams& params);

// Largest weight the rule can produce; assigned to the self pair in
// semi-oracle mode, where the self distance is noisy.
double self_weight(const NlmParams& params);

// Weight of candidate (m, l) for reference pixel (i, j), computed directly.
double nlm_pair_weight(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                       const NlmParams& params, int i, int j, int m, int l);

// Nonlocal means over the search set. Patch distances per search offset are
// evaluated for every pixel at once with separable periodic box sums, so the
// cost is O(n^2) per offset independent of delta. Offsets o and -o share one
// distance image when the distance is symmetric (no oracle or full oracle).
// Throws MissingCleanImage, DeltaTooLarge, WindowTooSmall.
ImageGrid nlm_denoise(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                      const NlmParams& params);

// Estimate at the single pixel (i, j), evaluating every pair directly.
double nlm_estimate_at(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                       const NlmParams& params, int i, int j);

// Reference implementation: nlm_estimate_at for every pixel.
ImageGrid nlm_denoise_naive(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                            const NlmParams& params);

// Hard-threshold NLM with delta = max(1, ceil(2 (ln n)^{1/2 + eps})) and
// t = 2 sigma^2 / (ln n)^{eps/2}, no oracle, full search.
NlmParams default_params(int n, double epsilon, double sigma);

// Tapered NLM with delta = ceil(2 ln n), alpha = 1 and h^2 = 2 / ln n, so a
// unit clean distance gets weight about n^{-1/2}.
NlmParams tapered_default_params(int n, double sigma);

// Assumption flags for semi-oracle parameter choices at size n.
struct AssumptionReport {
  bool t_positive;      // threshold slack > 0
  bool separates_half;  // t < 1/2: full-oracle weight is 0 when clean distance >= 1/2
  bool delta_small;     // delta <= n^{0.3}
  bool fits;            // 2 delta + 1 <= n
};
AssumptionReport check_assumptions(int n, const NlmParams& params);

// Monte Carlo estimate of P(d2 <= threshold) for two independently noisy
// patches of half-size delta whose clean distance is true_dist_sq.
double pass_probability(double true_dist_sq, double sigma, int delta, double threshold,
                        int trials, std::uint64_t seed);

// Monte Carlo mean of the weight rule applied to the same synthetic pair.
struct WeightMean {
  double mean;
  double standard_error;
};
WeightMean mean_pair_weight(double true_dist_sq, const NlmParams& params, int trials,
                            std::uint64_t seed);

}  // namespace horizon
