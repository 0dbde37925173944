#include "horizon/neighborhood_filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace horizon {

double yf_weight(double value, double reference, double tau) {
  const double d = value - reference;
  return std::exp(-d * d / (2.0 * tau * tau));
}

ImageGrid yaroslavsky(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                      const YfParams& params) {
  const int n = noisy.n();
  if (params.delta < 0) throw InvalidArgument("yaroslavsky: delta must be >= 0");
  if (!(params.tau > 0.0)) throw InvalidArgument("yaroslavsky: tau must be > 0");
  if (2 * params.delta + 1 > n) {
    throw DeltaTooLarge("yaroslavsky: window " + std::to_string(2 * params.delta + 1) +
                        " exceeds image size " + std::to_string(n));
  }
  if (params.oracle && !clean) throw MissingCleanImage("yaroslavsky: semi-oracle mode needs the clean image");
  if (clean && clean->n() != n) throw InvalidArgument("yaroslavsky: clean/noisy size mismatch");

  const int d = params.delta;
  const double inv = 1.0 / (2.0 * params.tau * params.tau);
  ImageGrid out(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double ref = params.oracle ? (*clean)(i, j) : noisy(i, j);
      // Shift exponents by the smallest squared difference so the largest
      // weight is exactly 1; the ratio is unchanged. Standard mode has a zero
      // self-difference already.
      double shift = 0.0;
      if (params.oracle) {
        shift = std::numeric_limits<double>::infinity();
        for (int l = j - d; l <= j + d; ++l) {
          for (int m = i - d; m <= i + d; ++m) {
            const double diff = noisy.wrapped(m, l) - ref;
            shift = std::min(shift, diff * diff);
          }
        }
      }
      double num = 0.0, den = 0.0;
      for (int l = j - d; l <= j + d; ++l) {
        for (int m = i - d; m <= i + d; ++m) {
          const double y = noisy.wrapped(m, l);
          const double diff = y - ref;
          const double w = std::exp(-(diff * diff - shift) * inv);
          num += w * y;
          den += w;
        }
      }
      out(i, j) = num / den;
    }
  }
  return out;
}

double yf_weight_mean(double sigma, double tau, int gap) {
  if (!(sigma > 0.0) || !(tau > 0.0)) throw InvalidArgument("yf_weight_mean: sigma, tau must be > 0");
  if (gap != 0 && gap != 1) throw InvalidArgument("yf_weight_mean: gap must be 0 or 1");
  const double s2 = sigma * sigma + tau * tau;
  return tau * std::exp(-static_cast<double>(gap) / (2.0 * s2)) / std::sqrt(s2);
}

}  // namespace horizon
