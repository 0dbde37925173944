#include <doctest.h>

#include <cmath>
#include <limits>

#include "horizon/horizon_model.hpp"
#include "horizon/nlm.hpp"
#include "horizon/noise.hpp"

using namespace horizon;

namespace {

ImageGrid random_image(int n, std::uint64_t seed, double scale = 1.0) {
  ImageGrid g(n);
  auto v = g.values();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = scale * (counter_uniform(seed, 0, k) - 0.5);
  return g;
}

// Patch distance written from the definition: full sum, then centre removed.
double distance_oracle(const ImageGrid& a, const ImageGrid& b, int i, int j, int m, int l, int delta) {
  double full = 0.0;
  for (int q = -delta; q <= delta; ++q)
    for (int p = -delta; p <= delta; ++p) {
      const double d = a.wrapped(i + p, j + q) - b.wrapped(m + p, l + q);
      full += d * d;
    }
  const double c = a.wrapped(i, j) - b.wrapped(m, l);
  return (full - c * c) / ((2 * delta + 1) * (2 * delta + 1) - 1);
}

double max_abs_diff(const ImageGrid& a, const ImageGrid& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
  return worst;
}

NlmParams hard(int delta, double t, double sigma, OracleLevel o = OracleLevel::none) {
  NlmParams p;
  p.delta = delta;
  p.t = t;
  p.sigma = sigma;
  p.oracle = o;
  return p;
}

}  // namespace

TEST_CASE("patch distance examples") {
  const ImageGrid y = random_image(9, 1);
  CHECK(patch_distance(y, y, 3, 4, 3, 4, 2) == 0.0);
  ImageGrid zeros(7, 0.0), ones(7, 1.0);
  CHECK(patch_distance(zeros, ones, 3, 3, 3, 3, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rho_sq(1) == 8);
  CHECK(rho_sq(3) == 48);
  CHECK_THROWS_AS(patch_distance(y, y, 0, 0, 0, 0, 0), InvalidArgument);
}

TEST_CASE("patch distance matches the definition and is symmetric") {
  const ImageGrid a = random_image(11, 2), b = random_image(11, 3);
  for (int k = 0; k < 30; ++k) {
    const int i = k % 11, j = (3 * k) % 11, m = (5 * k + 1) % 11, l = (7 * k + 2) % 11;
    for (int delta : {1, 2, 4}) {
      CHECK(patch_distance(a, b, i, j, m, l, delta) ==
            doctest::Approx(distance_oracle(a, b, i, j, m, l, delta)).epsilon(1e-13));
      CHECK(patch_distance(a, a, i, j, m, l, delta) ==
            doctest::Approx(patch_distance(a, a, m, l, i, j, delta)).epsilon(1e-14));
    }
  }
}

TEST_CASE("noisy patch distance is unbiased up to 2 sigma^2") {
  // Two noisy patches at different locations of the clean half-plane, both
  // clean patches identical, 1e4 trials.
  const int n = 32;
  const ImageGrid x = render(EdgeContour::constant(0.5), n);
  for (auto [delta, sigma] : {std::pair{3, 1.0}, std::pair{3, 0.5}}) {
    double s = 0.0, ss = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      const ImageGrid y = add_noise(x, NoiseSpec{sigma, 404, static_cast<std::uint64_t>(t)});
      const double d = patch_distance(y, y, 3, 4, 20, 4, delta) - patch_distance(x, x, 3, 4, 20, 4, delta);
      s += d;
      ss += d * d;
    }
    const double m = s / trials;
    const double se = std::sqrt((ss / trials - m * m) / (trials - 1.0));
    CHECK(std::abs(m - 2 * sigma * sigma) < 4 * se);
  }
}

TEST_CASE("noise floors and weight rules") {
  NlmParams p = hard(2, 0.1, 0.5);
  CHECK(noise_floor(p) == 0.5);
  p.oracle = OracleLevel::semi;
  CHECK(noise_floor(p) == 0.25);
  p.oracle = OracleLevel::full;
  CHECK(noise_floor(p) == 0.0);
  p.oracle = OracleLevel::none;
  CHECK(weight_from_distance(0.6, p) == 1.0);
  CHECK(weight_from_distance(0.6000001, p) == 0.0);
  NlmParams q = p;
  q.weight_kind = WeightKind::tapered;
  q.taper_alpha = 0.8;
  q.taper_bandwidth = 0.25;
  CHECK(weight_from_distance(0.2, q) == 0.8);
  CHECK(weight_from_distance(0.75, q) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(self_weight(q) == 0.8);
  CHECK(self_weight(p) == 1.0);
}

TEST_CASE("full oracle on a constant image averages everything") {
  const ImageGrid x(10, 0.3);
  const ImageGrid y = add_noise(x, NoiseSpec{2.0, 5, 0});
  const ImageGrid out = nlm_denoise(y, x, hard(2, 0.01, 2.0, OracleLevel::full));
  for (double v : out.values()) CHECK(v == doctest::Approx(y.mean()).epsilon(1e-12));
}

TEST_CASE("full oracle on the half-plane: same side passes, far cross side fails") {
  const int n = 16, delta = 2;
  const ImageGrid x = render(EdgeContour::constant(0.5), n);
  const NlmParams p = hard(delta, 0.25, 1.0, OracleLevel::full);
  // Rows 0..7 are 1; rows 8..15 are 0. Count differing non-centre offsets by
  // brute force and compare the weight against the 7-of-24 rule.
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double d = patch_distance(x, x, 0, j, 5, l, delta);
      const int differing = static_cast<int>(std::lround(d * 24));
      const double w = nlm_pair_weight(x, x, p, 0, j, 5, l);
      if (differing == 0) CHECK(w == 1.0);
      if (differing >= 7) CHECK(w == 0.0);
      if (x(0, j) == x(5, l) && d == 0.0) CHECK(w == 1.0);
    }
  }
}

TEST_CASE("tiny noise: hard weights pick same-side pixels only") {
  const int n = 16;
  const ImageGrid x = render(EdgeContour::constant(0.5), n);
  const ImageGrid y = add_noise(x, NoiseSpec{1e-12, 6, 0});
  // Adjacent rows across the edge differ on 4 of 24 offsets, so t < 1/6.
  const ImageGrid out = nlm_denoise(y, std::nullopt, hard(2, 0.1, 1e-12));
  CHECK(max_abs_diff(out, x) < 1e-6);
}

TEST_CASE("accelerated and naive NLM agree within 1e-10 on random 32x32 images") {
  const int n = 32;
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const ImageGrid x = random_image(n, 700 + trial);
    const double sigma = 0.2 + 0.05 * (trial % 4);
    const ImageGrid y = add_noise(x, NoiseSpec{sigma, 800, static_cast<std::uint64_t>(trial)});
    for (OracleLevel o : {OracleLevel::none, OracleLevel::semi, OracleLevel::full}) {
      for (WeightKind kind : {WeightKind::hard, WeightKind::tapered}) {
        NlmParams p = hard(1 + trial % 3, 0.05, sigma, o);
        p.weight_kind = kind;
        p.taper_alpha = 0.9;
        p.taper_bandwidth = 0.1;
        if (trial % 5 == 4) p.window = 3 + trial % 3;
        const std::optional<ImageGrid> clean = o == OracleLevel::none ? std::nullopt : std::optional(x);
        CHECK(max_abs_diff(nlm_denoise(y, clean, p), nlm_denoise_naive(y, clean, p)) < 1e-10);
        ++checked;
      }
    }
  }
  CHECK(checked == 120);
}

TEST_CASE("search window ignores duplicate offsets on small tori") {
  const ImageGrid y = random_image(8, 9);
  NlmParams p = hard(1, 0.2, 0.3);
  p.window = 3;  // 7 x 7 offsets on an 8 x 8 torus
  CHECK(max_abs_diff(nlm_denoise(y, std::nullopt, p), nlm_denoise_naive(y, std::nullopt, p)) < 1e-12);
  p.window = 4;  // wraps onto itself: the whole torus
  NlmParams full = p;
  full.window.reset();
  CHECK(max_abs_diff(nlm_denoise(y, std::nullopt, p), nlm_denoise(y, std::nullopt, full)) < 1e-12);
}

TEST_CASE("output is a convex combination and the self pair always passes") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 12 + trial % 4;
    const ImageGrid x = random_image(n, 900 + trial);
    const ImageGrid y = add_noise(x, NoiseSpec{0.4, 901, static_cast<std::uint64_t>(trial)});
    const OracleLevel o = static_cast<OracleLevel>(trial % 3);
    NlmParams p = hard(1 + trial % 2, 0.02, 0.4, o);
    if (trial % 2) p.weight_kind = WeightKind::tapered;
    const std::optional<ImageGrid> clean = o == OracleLevel::none ? std::nullopt : std::optional(x);
    const ImageGrid out = nlm_denoise(y, clean, p);
    for (double v : out.values()) {
      CHECK(v >= y.min() - 1e-12);
      CHECK(v <= y.max() + 1e-12);
    }
    if (p.weight_kind == WeightKind::hard) {
      for (int i = 0; i < n; i += 5) CHECK(nlm_pair_weight(y, clean, p, i, i, i, i) == 1.0);
    }
  }
}

TEST_CASE("errors") {
  const ImageGrid y(8);
  CHECK_THROWS_AS(nlm_denoise(y, std::nullopt, hard(1, 0.1, 1.0, OracleLevel::semi)), MissingCleanImage);
  CHECK_THROWS_AS(nlm_denoise(y, std::nullopt, hard(4, 0.1, 1.0)), DeltaTooLarge);
  NlmParams p = hard(1, 0.1, 1.0);
  p.window = 0;
  CHECK_THROWS_AS(nlm_denoise(y, std::nullopt, p), WindowTooSmall);
  CHECK_THROWS_AS(nlm_denoise(y, std::nullopt, hard(1, 0.0, 1.0)), InvalidArgument);
}

TEST_CASE("default parameters") {
  const NlmParams a = default_params(1024, 0.5, 1.0);
  CHECK(a.delta == 14);
  CHECK(a.t == doctest::Approx(2.0 / std::pow(std::log(1024.0), 0.25)).epsilon(1e-14));
  CHECK(a.t == doctest::Approx(1.2328).epsilon(1e-4));
  const NlmParams b = default_params(64, 0.1, 0.5);
  CHECK(b.delta == 5);
  CHECK(b.t == doctest::Approx(0.465609).epsilon(1e-5));
  CHECK(b.weight_kind == WeightKind::hard);
  CHECK(b.oracle == OracleLevel::none);
  CHECK_FALSE(b.window.has_value());
  // n = 3 has ln n just above 1: powers stay near 1.
  const NlmParams c = default_params(3, 1e-9, 1.0);
  CHECK(c.delta == 3);
  CHECK(c.t == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(default_params(2, 0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(default_params(64, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("tapered default parameters") {
  const NlmParams p = tapered_default_params(55, 1.0);
  CHECK(p.delta == 9);
  CHECK(p.taper_bandwidth == doctest::Approx(2.0 / std::log(55.0)).epsilon(1e-14));
  CHECK(p.taper_bandwidth == doctest::Approx(0.4991).epsilon(1e-3));
  CHECK(p.weight_kind == WeightKind::tapered);
  CHECK(weight_from_distance(2.0, p) == 1.0);
  CHECK(weight_from_distance(3.0, p) == doctest::Approx(std::exp(-1.0 / p.taper_bandwidth)).epsilon(1e-14));
  CHECK(weight_from_distance(3.0, p) == doctest::Approx(1.0 / std::sqrt(55.0)).epsilon(2e-3));
}

TEST_CASE("assumption flags") {
  const AssumptionReport r = check_assumptions(4096, hard(3, 0.2, 1.0));
  CHECK(r.t_positive);
  CHECK(r.separates_half);
  CHECK(r.delta_small);
  CHECK(r.fits);
  const AssumptionReport s = check_assumptions(64, hard(8, 0.7, 1.0));
  CHECK_FALSE(s.separates_half);
  CHECK_FALSE(s.delta_small);
}

TEST_CASE("pass probabilities") {
  CHECK(pass_probability(0.0, 0.5, 8, 0.5 + 0.2, 2000, 1) > 0.95);
  CHECK(pass_probability(1.0, 0.5, 8, 0.5, 100000, 2) < 0.01);
  CHECK(pass_probability(0.3, 1.0, 2, std::numeric_limits<double>::infinity(), 1000, 3) == 1.0);
  CHECK_THROWS_AS(pass_probability(0.0, 1.0, 2, 1.0, 999, 3), InvalidArgument);
}

TEST_CASE("tapered weights: bounded, near 1 at distance 0, order n^-1/2 at distance 1") {
  for (int n : {64, 256}) {
    const NlmParams p = tapered_default_params(n, 0.5);
    const WeightMean same = mean_pair_weight(0.0, p, 4000, 10);
    const WeightMean far = mean_pair_weight(1.0, p, 4000, 11);
    CHECK(same.mean >= 0.5);
    CHECK(same.mean <= p.taper_alpha);
    CHECK(far.mean <= 3.0 / std::sqrt(double(n)));
    CHECK(far.mean >= 0.0);
  }
}
