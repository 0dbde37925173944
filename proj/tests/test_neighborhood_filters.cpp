#include <doctest.h>

#include <cmath>

#include "horizon/horizon_model.hpp"
#include "horizon/linear_filters.hpp"
#include "horizon/neighborhood_filters.hpp"
#include "horizon/noise.hpp"

using namespace horizon;

namespace {

ImageGrid random_image(int n, std::uint64_t seed) {
  ImageGrid g(n);
  auto v = g.values();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 2.0 * counter_uniform(seed, 0, k) - 1.0;
  return g;
}

struct MeanSe {
  double mean;
  double se;
};

template <class F>
MeanSe monte_carlo(int draws, F f) {
  double s = 0.0, ss = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double v = f(k);
    s += v;
    ss += v * v;
  }
  const double m = s / draws;
  return {m, std::sqrt((ss / draws - m * m) / (draws - 1.0))};
}

}  // namespace

TEST_CASE("constant image is a fixed point") {
  const ImageGrid c(12, 0.6);
  for (bool oracle : {false, true}) {
    const ImageGrid out = yaroslavsky(c, c, YfParams{2, 0.3, oracle});
    for (double v : out.values()) CHECK(v == doctest::Approx(0.6).epsilon(1e-14));
  }
}

TEST_CASE("very wide bandwidth turns the filter into a box filter") {
  const ImageGrid y = random_image(16, 4);
  const ImageGrid a = yaroslavsky(y, std::nullopt, YfParams{2, 1e8, false});
  const ImageGrid b = box_filter(y, 2);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a.values()[k] - b.values()[k]) < 1e-12);
}

TEST_CASE("output is a convex combination of the neighbourhood") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10 + trial % 5;
    const ImageGrid y = random_image(n, 50 + trial);
    const ImageGrid x = render(EdgeContour::constant(0.5), n);
    const YfParams p{1 + trial % 3, 0.2 + 0.1 * (trial % 4), trial % 2 == 1};
    const ImageGrid out = yaroslavsky(y, x, p);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        double lo = 1e300, hi = -1e300;
        for (int l = j - p.delta; l <= j + p.delta; ++l)
          for (int m = i - p.delta; m <= i + p.delta; ++m) {
            lo = std::min(lo, y.wrapped(m, l));
            hi = std::max(hi, y.wrapped(m, l));
          }
        CHECK(out(i, j) >= lo - 1e-12);
        CHECK(out(i, j) <= hi + 1e-12);
      }
    }
  }
}

TEST_CASE("semi-oracle weights recover the clean half-plane as sigma goes to 0") {
  const ImageGrid x = render(EdgeContour::constant(0.5), 16);
  const ImageGrid y = add_noise(x, NoiseSpec{1e-9, 3, 0});
  const ImageGrid out = yaroslavsky(y, x, YfParams{2, 0.05, true});
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(out.values()[k] - x.values()[k]) < 1e-6);
}

TEST_CASE("semi-oracle weights survive huge residuals") {
  // Every neighbour is far from the clean reference; shifting the exponents
  // keeps the denominator away from zero.
  ImageGrid x(5, 0.0), y(5, 40.0);
  y(2, 2) = 41.0;
  const ImageGrid out = yaroslavsky(y, x, YfParams{1, 0.1, true});
  for (double v : out.values()) CHECK(std::isfinite(v));
  CHECK(out(2, 2) == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("errors") {
  const ImageGrid y(8);
  CHECK_THROWS_AS(yaroslavsky(y, std::nullopt, YfParams{1, 1.0, true}), MissingCleanImage);
  CHECK_THROWS_AS(yaroslavsky(y, std::nullopt, YfParams{4, 1.0, false}), DeltaTooLarge);
  CHECK_THROWS_AS(yaroslavsky(y, std::nullopt, YfParams{1, 0.0, false}), InvalidArgument);
}

TEST_CASE("closed-form weight means") {
  CHECK(yf_weight_mean(1.0, 1.0, 1) == doctest::Approx(std::exp(-0.25) / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(yf_weight_mean(1.0, 1.0, 1) == doctest::Approx(0.5506953149).epsilon(1e-9));
  CHECK(yf_weight_mean(1.0, 1.0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  for (double s : {0.3, 1.0, 2.0})
    for (double t : {0.5, 1.5}) CHECK(yf_weight_mean(s, t, 1) < yf_weight_mean(s, t, 0));
  CHECK_THROWS_AS(yf_weight_mean(1.0, 1.0, 2), InvalidArgument);
}

TEST_CASE("Monte Carlo weight means match the closed form") {
  // E exp(-(Z - 1)^2 / 2), Z ~ N(0,1), from 1e6 draws.
  const MeanSe a = monte_carlo(1000000, [](int k) {
    const double z = counter_normal(31, 0, static_cast<std::uint64_t>(k));
    return yf_weight(z, 1.0, 1.0);
  });
  CHECK(std::abs(a.mean - yf_weight_mean(1.0, 1.0, 1)) < 4 * a.se);
}

TEST_CASE("semi-oracle weights on a noisy half-plane match the closed forms") {
  const int n = 64;
  const double sigma = 0.5, tau = 0.4;
  const ImageGrid x = render(EdgeContour::constant(0.5), n);
  const auto rows = edge_rows(x);
  std::vector<double> same, cross;
  for (int trial = 0; trial < 20; ++trial) {
    const ImageGrid y = add_noise(x, NoiseSpec{sigma, 15, static_cast<std::uint64_t>(trial)});
    for (int i = 0; i < n; ++i) {
      const int a = rows[i].above;
      // Reference pixel above the edge (clean 0): same-value neighbour two
      // rows up, cross-value neighbour on the row below the edge.
      same.push_back(yf_weight(y(i, a + 2), x(i, a), tau));
      cross.push_back(yf_weight(y((i + 1) % n, rows[i].below), x(i, a), tau));
    }
  }
  auto check = [](const std::vector<double>& w, double expected) {
    double s = 0.0, ss = 0.0;
    for (double v : w) {
      s += v;
      ss += v * v;
    }
    const double m = s / w.size();
    const double se = std::sqrt((ss / w.size() - m * m) / (w.size() - 1.0));
    CHECK(std::abs(m - expected) < 4 * se);
  };
  check(same, yf_weight_mean(sigma, tau, 0));
  check(cross, yf_weight_mean(sigma, tau, 1));
}

TEST_CASE("range filter risk does not vanish as n grows") {
  // Window covering the torus except one row and column.
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const ImageGrid x = render(EdgeContour::constant(0.5), n);
    double risk = 0.0;
    const int trials = 3;
    for (int t = 0; t < trials; ++t) {
      const ImageGrid y = add_noise(x, NoiseSpec{1.0, 21, static_cast<std::uint64_t>(t)});
      risk += mean_squared_error(x, yaroslavsky(y, std::nullopt, YfParams{n / 2 - 1, 1.0, false})) / trials;
    }
    CHECK(risk > 0.1);
    if (prev > 0.0) CHECK(risk > 0.8 * prev);
    prev = risk;
  }
}
