#include "horizon/wavelet.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace horizon {

namespace {

void require_power_of_two(int n, const char* who) {
  if (!is_power_of_two(n)) {
    throw NotPowerOfTwo(std::string(who) + ": n must be a power of two >= 2, got " + std::to_string(n));
  }
}

// One analysis step on x[0], x[stride], ..., x[(len-1)*stride].
void analyse(double* x, int len, int stride, std::vector<double>& tmp) {
  const int half = len / 2;
  const double s = std::numbers::sqrt2 / 2.0;
  for (int k = 0; k < half; ++k) {
    const double a = x[(2 * k) * stride], b = x[(2 * k + 1) * stride];
    tmp[k] = (a + b) * s;
    tmp[half + k] = (a - b) * s;
  }
  for (int k = 0; k < len; ++k) x[k * stride] = tmp[k];
}

void synthesise(double* x, int len, int stride, std::vector<double>& tmp) {
  const int half = len / 2;
  const double s = std::numbers::sqrt2 / 2.0;
  for (int k = 0; k < half; ++k) {
    const double a = x[k * stride], d = x[(half + k) * stride];
    tmp[2 * k] = (a + d) * s;
    tmp[2 * k + 1] = (a - d) * s;
  }
  for (int k = 0; k < len; ++k) x[k * stride] = tmp[k];
}

}  // namespace

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

WaveletCoeffs haar2_forward(const ImageGrid& image) {
  const int n = image.n();
  require_power_of_two(n, "haar2_forward");
  WaveletCoeffs out{n, 0, image};
  auto v = out.coeffs.values();
  std::vector<double> tmp(n);
  for (int len = n; len >= 2; len /= 2) {
    for (int j = 0; j < len; ++j) analyse(&v[static_cast<std::size_t>(j) * n], len, 1, tmp);
    for (int i = 0; i < len; ++i) analyse(&v[i], len, n, tmp);
    ++out.levels;
  }
  return out;
}

ImageGrid haar2_inverse(const WaveletCoeffs& coeffs) {
  const int n = coeffs.n;
  require_power_of_two(n, "haar2_inverse");
  if (coeffs.coeffs.n() != n) throw InvalidArgument("haar2_inverse: coefficient array size mismatch");
  ImageGrid out = coeffs.coeffs;
  auto v = out.values();
  std::vector<double> tmp(n);
  for (int len = 2; len <= n; len *= 2) {
    for (int i = 0; i < len; ++i) synthesise(&v[i], len, n, tmp);
    for (int j = 0; j < len; ++j) synthesise(&v[static_cast<std::size_t>(j) * n], len, 1, tmp);
  }
  return out;
}

WaveletCoeffs hard_threshold(const WaveletCoeffs& coeffs, double theta) {
  if (!(theta >= 0.0)) throw InvalidArgument("hard_threshold: theta must be >= 0");
  WaveletCoeffs out = coeffs;
  auto v = out.coeffs.values();
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(std::abs(v[k]) > theta)) v[k] = 0.0;
  }
  return out;
}

double universal_threshold(int n, double sigma) {
  if (n < 2) throw InvalidArgument("universal_threshold: n must be >= 2");
  if (!(sigma >= 0.0)) throw InvalidArgument("universal_threshold: sigma must be >= 0");
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n) * n));
}

ImageGrid wavelet_denoise(const ImageGrid& noisy, double sigma) {
  require_power_of_two(noisy.n(), "wavelet_denoise");
  return haar2_inverse(hard_threshold(haar2_forward(noisy), universal_threshold(noisy.n(), sigma)));
}

}  // namespace horizon
