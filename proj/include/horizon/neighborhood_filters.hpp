#pragma once

#include <optional>

#include "horizon/image.hpp"

namespace horizon {

struct YfParams {
  int delta = 1;       // half-size of the square search neighborhood
  double tau = 1.0;    // photometric bandwidth
  bool oracle = false; // semi-oracle: compare against the clean centre value
};

// Photometric weight exp(-(value - reference)^2 / (2 tau^2)).
double yf_weight(double value, double reference, double tau);

// Yaroslavsky / SUSAN filter with periodic neighborhoods.
//   out(i,j) = sum_{C(i,j)} w y / sum_{C(i,j)} w,
//   w = exp(-(y(m,l) - r)^2 / (2 tau^2)),
// with r = y(i,j) (standard) or r = x(i,j) (semi-oracle, needs `clean`).
// The standard mode is the practical filter; the semi-oracle variant is the
// one with a proven risk rate.
// Throws MissingCleanImage, DeltaTooLarge (2*delta+1 > n).
ImageGrid yaroslavsky(const ImageGrid& noisy, const std::optional<ImageGrid>& clean,
                      const YfParams& params);

// Closed-form E[w] for a semi-oracle weight whose clean values differ by
// `gap` (0 or 1):  tau e^{-gap^2/(2(sigma^2+tau^2))} / sqrt(sigma^2 + tau^2).
double yf_weight_mean(double sigma, double tau, int gap);

}  // namespace horizon
