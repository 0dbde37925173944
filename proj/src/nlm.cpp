#include "horizon/nlm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "horizon/noise.hpp"

namespace horizon {

std::string to_string(WeightKind kind) { return kind == WeightKind::hard ? "hard" : "tapered"; }

std::string to_string(OracleLevel level) {
  switch (level) {
    case OracleLevel::none: return "none";
    case OracleLevel::semi: return "semi";
    case OracleLevel::full: return "full";
  }
  return "unknown";
}

int rho_sq(int delta) { return (2 * delta + 1) * (2 * delta + 1) - 1; }

double patch_distance(const ImageGrid& ref, const ImageGrid& cand, int i, int j, int m, int l,
                      int delta) {
  if (delta < 1) throw InvalidArgument("patch_distance: delta must be >= 1");
  double s = 0.0;
  for (int q = -delta; q <= delta; ++q) {
    for (int p = -delta; p <= delta; ++p) {
      if (p == 0 && q == 0) continue;
      const double d = ref.wrapped(i + p, j + q) - cand.wrapped(m + p, l + q);
      s += d * d;
    }
  }
  return s / rho_sq(delta);
}

double noise_floor(const NlmParams& params) {
  const double s2 = params.sigma * params.sigma;
  switch (params.oracle) {
    case OracleLevel::none: return 2.0 * s2;
    case OracleLevel::semi: return s2;
    case OracleLevel::full: return 0.0;
  }
  return 0.0;
}

double weight_from_distance(double d2, const NlmParams& params) {
  const double floor = noise_floor(params);
  if (params.weight_kind == WeightKind::hard) return d2 <= floor + params.t ? 1.0 : 0.0;
  const double excess = std::max(d2 - floor, 0.0);
  return std::min(params.taper_alpha, std::exp(-excess / params.taper_bandwidth));
}

double self_weight(const NlmParams& params) {
  return params.weight_kind == WeightKind::hard ? 1.0 : std::min(params.taper_alpha, 1.0);
}

namespace {

void validate(const ImageGrid& noisy, const std::optional<ImageGrid>& clean, const NlmParams& p) {
  const int n = noisy.n();
  if (p.delta < 1) throw InvalidArgument("nlm: delta must be >= 1");
  if (2 * p.delta + 1 > n) {
    throw DeltaTooLarge("nlm: patch width " + std::to_string(2 * p.delta + 1) +
                        " exceeds image size " + std::to_string(n));
  }
  if (p.window && *p.window < 1) throw WindowTooSmall("nlm: search window radius must be >= 1");
  if (!(p.sigma > 0.0)) throw InvalidArgument("nlm: sigma must be > 0");
  if (p.weight_kind == WeightKind::hard && !(p.t > 0.0)) throw InvalidArgument("nlm: t must be > 0");
  if (p.weight_kind == WeightKind::tapered) {
    if (!(p.taper_alpha > 0.0)) throw InvalidArgument("nlm: taper_alpha must be > 0");
    if (!(p.taper_bandwidth > 0.0)) throw InvalidArgument("nlm: taper_bandwidth must be > 0");
  }
  if (p.oracle != OracleLevel::none) {
    if (!clean) throw MissingCleanImage("nlm: oracle level " + to_string(p.oracle) + " needs the clean image");
    if (clean->n() != n) throw InvalidArgument("nlm: clean/noisy size mismatch");
  }
}

// Reference and candidate images entering the distance for each oracle level.
std::pair<const ImageGrid*, const ImageGrid*> distance_images(const ImageGrid& noisy,
                                                              const std::optional<ImageGrid>& clean,
                                                              OracleLevel level) {
  switch (level) {
    case OracleLevel::none: return {&noisy, &noisy};
    case OracleLevel::semi: return {&*clean, &noisy};
    case OracleLevel::full: return {&*clean, &*clean};
  }
  return {&noisy, &noisy};
}

// Search offsets reduced modulo n, deduplicated, in a fixed order.
std::vector<std::pair<int, int>> search_offsets(int n, const std::optional<int>& window) {
  std::set<std::pair<int, int>> seen;
  if (!window || 2 * *window + 1 >= n) {
    std::vector<std::pair<int, int>> all;
    all.reserve(static_cast<std::size_t>(n) * n);
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) all.emplace_back(a, b);
    return all;
  }
  const int w = *window;
  for (int b = -w; b <= w; ++b)
    for (int a = -w; a <= w; ++a) seen.emplace(((b % n) + n) % n, ((a % n) + n) % n);
  std::vector<std::pair<int, int>> out;
  out.reserve(seen.size());
  for (const auto& [b, a] : seen) out.emplace_back(a, b);
  return out;
}

// Periodic (2d+1)-wide box sums of `src` along rows then columns.
class BoxSummer {
 public:
  BoxSummer(int n, int d) : n_(n), d_(d), ext_(n + 2 * d), rows_(static_cast<std::size_t>(n) * n) {}

  void run(const std::vector<double>& src, std::vector<double>& dst) {
    const int n = n_, d = d_, w = 2 * d + 1;
    for (int j = 0; j < n; ++j) {
      const double* s = &src[static_cast<std::size_t>(j) * n];
      for (int k = 0; k < n + 2 * d; ++k) ext_[k] = s[((k - d) % n + n) % n];
      double acc = 0.0;
      for (int k = 0; k < w; ++k) acc += ext_[k];
      double* r = &rows_[static_cast<std::size_t>(j) * n];
      r[0] = acc;
      for (int i = 1; i < n; ++i) {
        acc += ext_[i + w - 1] - ext_[i - 1];
        r[i] = acc;
      }
    }
    std::fill(dst.begin(), dst.end(), 0.0);
    double* out0 = dst.data();
    for (int v = -d; v <= d; ++v) {
      const double* r = &rows_[static_cast<std::size_t>(((v % n) + n) % n) * n];
      for (int i = 0; i < n; ++i) out0[i] += r[i];
    }
    for (int j = 1; j < n; ++j) {
      const double* prev = &dst[static_cast<std::size_t>(j - 1) * n];
      const double* add = &rows_[static_cast<std::size_t>((j + d) % n) * n];
      const double* sub = &rows_[static_cast<std::size_t>(((j - d - 1) % n + n) % n) * n];
      double* out = &dst[static_cast<std::size_t>(j) * n];
      for (int i = 0; i < n; ++i) out[i] = prev[i] + (add[i] - sub[i]);
    }
  }

 private:
  int n_, d_;
  std::vector<double> ext_;
  std::vector<double> rows_;
};

}  // namespace

namespace {

double pair_weight_unchecked(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                             const NlmParams& params, int i, int j, int m, int l) {
  if (params.oracle == OracleLevel::semi && noisy.wrap(i) == noisy.wrap(m) &&
      noisy.wrap(j) == noisy.wrap(l)) {
    return self_weight(params);
  }
  const auto [ref, cand] = distance_images(noisy, clean, params.oracle);
  return weight_from_distance(patch_distance(*ref, *cand, i, j, m, l, params.delta), params);
}

double estimate_unchecked(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                          const NlmParams& params, const std::vector<std::pair<int, int>>& offsets,
                          int i, int j) {
  double num = 0.0, den = 0.0;
  for (const auto& [a, b] : offsets) {
    const int m = noisy.wrap(i + a), l = noisy.wrap(j + b);
    const double w = pair_weight_unchecked(noisy, clean, params, i, j, m, l);
    num += w * noisy(m, l);
    den += w;
  }
  return num / den;
}

}  // namespace

double nlm_pair_weight(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                       const NlmParams& params, int i, int j, int m, int l) {
  validate(noisy, clean, params);
  return pair_weight_unchecked(noisy, clean, params, i, j, m, l);
}

double nlm_estimate_at(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                       const NlmParams& params, int i, int j) {
  validate(noisy, clean, params);
  return estimate_unchecked(noisy, clean, params, search_offsets(noisy.n(), params.window), noisy.wrap(i),
                            noisy.wrap(j));
}

ImageGrid nlm_denoise_naive(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                            const NlmParams& params) {
  validate(noisy, clean, params);
  const int n = noisy.n();
  const auto offsets = search_offsets(n, params.window);
  ImageGrid out(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) out(i, j) = estimate_unchecked(noisy, clean, params, offsets, i, j);
  }
  return out;
}

ImageGrid nlm_denoise(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                      const NlmParams& params) {
  validate(noisy, clean, params);
  const int n = noisy.n();
  const std::size_t count = static_cast<std::size_t>(n) * n;
  const auto [ref_img, cand_img] = distance_images(noisy, clean, params.oracle);
  const auto ref = ref_img->values();
  const auto cand = cand_img->values();
  const auto y = noisy.values();
  const bool symmetric = params.oracle != OracleLevel::semi;
  const double inv_rho2 = 1.0 / rho_sq(params.delta);
  const bool hard = params.weight_kind == WeightKind::hard;
  const double floor = noise_floor(params);
  const double threshold = floor + params.t;
  const double inv_h2 = 1.0 / params.taper_bandwidth;
  const double alpha = params.taper_alpha;

  const auto offsets = search_offsets(n, params.window);
  std::set<std::pair<int, int>> offset_set(offsets.begin(), offsets.end());

  std::vector<double> num(count, 0.0), den(count, 0.0);
  std::vector<double> diff(count), box(count), weight(count);
  BoxSummer summer(n, params.delta);

  for (const auto& [a, b] : offsets) {
    const std::pair<int, int> mirror{(n - a) % n, (n - b) % n};
    bool paired = false;
    if (symmetric && mirror != std::pair<int, int>{a, b} && offset_set.count(mirror)) {
      // Handle each {o, -o} pair once, from the lexicographically smaller member.
      if (std::pair<int, int>{b, a} > std::pair<int, int>{mirror.second, mirror.first}) continue;
      paired = true;
    }

    // diff(p) = (ref(p) - cand(p + o))^2
    for (int j = 0; j < n; ++j) {
      const double* r = &ref[static_cast<std::size_t>(j) * n];
      const double* c = &cand[static_cast<std::size_t>((j + b) % n) * n];
      double* d = &diff[static_cast<std::size_t>(j) * n];
      const int split = n - a;
      for (int i = 0; i < split; ++i) {
        const double e = r[i] - c[i + a];
        d[i] = e * e;
      }
      for (int i = split; i < n; ++i) {
        const double e = r[i] - c[i + a - n];
        d[i] = e * e;
      }
    }
    summer.run(diff, box);

    if (a == 0 && b == 0 && params.oracle == OracleLevel::semi) {
      std::fill(weight.begin(), weight.end(), self_weight(params));
    } else if (hard) {
      for (std::size_t k = 0; k < count; ++k) {
        weight[k] = (box[k] - diff[k]) * inv_rho2 <= threshold ? 1.0 : 0.0;
      }
    } else {
      for (std::size_t k = 0; k < count; ++k) {
        const double excess = std::max((box[k] - diff[k]) * inv_rho2 - floor, 0.0);
        weight[k] = std::min(alpha, std::exp(-excess * inv_h2));
      }
    }

    for (int j = 0; j < n; ++j) {
      const std::size_t row = static_cast<std::size_t>(j) * n;
      const std::size_t shifted = static_cast<std::size_t>((j + b) % n) * n;
      const double* w = &weight[row];
      double* nu = &num[row];
      double* de = &den[row];
      const double* yc = &y[shifted];
      const int split = n - a;
      for (int i = 0; i < split; ++i) {
        nu[i] += w[i] * yc[i + a];
        de[i] += w[i];
      }
      for (int i = split; i < n; ++i) {
        nu[i] += w[i] * yc[i + a - n];
        de[i] += w[i];
      }
      if (paired) {
        // The candidate p + o sees p through offset -o with the same distance.
        const double* yr = &y[row];
        double* nu2 = &num[shifted];
        double* de2 = &den[shifted];
        for (int i = 0; i < split; ++i) {
          nu2[i + a] += w[i] * yr[i];
          de2[i + a] += w[i];
        }
        for (int i = split; i < n; ++i) {
          nu2[i + a - n] += w[i] * yr[i];
          de2[i + a - n] += w[i];
        }
      }
    }
  }

  ImageGrid out(n);
  auto o = out.values();
  for (std::size_t k = 0; k < count; ++k) o[k] = num[k] / den[k];
  return out;
}

NlmParams default_params(int n, double epsilon, double sigma) {
  if (n < 3) throw InvalidArgument("default_params: n must be >= 3");
  if (!(epsilon > 0.0)) throw InvalidArgument("default_params: epsilon must be > 0");
  if (!(sigma > 0.0)) throw InvalidArgument("default_params: sigma must be > 0");
  const double ln = std::log(static_cast<double>(n));
  NlmParams p;
  p.delta = std::max(1, static_cast<int>(std::ceil(2.0 * std::pow(ln, 0.5 + epsilon))));
  p.t = 2.0 * sigma * sigma / std::pow(ln, epsilon / 2.0);
  p.sigma = sigma;
  p.epsilon = epsilon;
  return p;
}

NlmParams tapered_default_params(int n, double sigma) {
  if (n < 3) throw InvalidArgument("tapered_default_params: n must be >= 3");
  if (!(sigma > 0.0)) throw InvalidArgument("tapered_default_params: sigma must be > 0");
  const double ln = std::log(static_cast<double>(n));
  NlmParams p;
  p.delta = static_cast<int>(std::ceil(2.0 * ln));
  p.sigma = sigma;
  p.weight_kind = WeightKind::tapered;
  p.taper_alpha = 1.0;
  p.taper_bandwidth = 2.0 / ln;
  return p;
}

AssumptionReport check_assumptions(int n, const NlmParams& params) {
  return {params.t > 0.0, params.t < 0.5,
          params.delta <= std::pow(static_cast<double>(n), 0.3),
          2 * params.delta + 1 <= n};
}

namespace {

// Noisy distance between a clean-zero patch and a patch offset by
// sqrt(true_dist_sq) on every offset, both with fresh noise.
double synthetic_distance(double shift, double sigma, int delta, std::uint64_t seed,
                          std::uint64_t trial) {
  const int w = 2 * delta + 1;
  const std::uint64_t cells = static_cast<std::uint64_t>(w) * w;
  const std::uint64_t centre = cells / 2;
  double s = 0.0;
  for (std::uint64_t k = 0; k < cells; ++k) {
    if (k == centre) continue;
    const double a = sigma * counter_normal(seed, trial, k);
    const double b = shift + sigma * counter_normal(seed, trial, cells + k);
    s += (a - b) * (a - b);
  }
  return s / rho_sq(delta);
}

void check_synthetic(double true_dist_sq, double sigma, int delta, int trials) {
  if (!(true_dist_sq >= 0.0)) throw InvalidArgument("true_dist_sq must be >= 0");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be > 0");
  if (delta < 1) throw InvalidArgument("delta must be >= 1");
  if (trials < 1000) throw InvalidArgument("Monte Carlo pair checks need at least 1000 trials");
}

}  // namespace

double pass_probability(double true_dist_sq, double sigma, int delta, double threshold, int trials,
                        std::uint64_t seed) {
  check_synthetic(true_dist_sq, sigma, delta, trials);
  const double shift = std::sqrt(true_dist_sq);
  long passed = 0;
  for (int k = 0; k < trials; ++k) {
    if (synthetic_distance(shift, sigma, delta, seed, static_cast<std::uint64_t>(k)) <= threshold) ++passed;
  }
  return static_cast<double>(passed) / trials;
}

WeightMean mean_pair_weight(double true_dist_sq, const NlmParams& params, int trials,
                            std::uint64_t seed) {
  check_synthetic(true_dist_sq, params.sigma, params.delta, trials);
  if (params.oracle != OracleLevel::none) {
    throw InvalidArgument("mean_pair_weight: synthetic pairs are both noisy (oracle none)");
  }
  const double shift = std::sqrt(true_dist_sq);
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < trials; ++k) {
    const double w = weight_from_distance(
        synthetic_distance(shift, params.sigma, params.delta, seed, static_cast<std::uint64_t>(k)), params);
    sum += w;
    sum_sq += w * w;
  }
  const double mean = sum / trials;
  const double var = std::max(sum_sq / trials - mean * mean, 0.0) * trials / (trials - 1.0);
  return {mean, std::sqrt(var / trials)};
}

}  // namespace horizon
