#pragma once

#include "horizon/image.hpp"

namespace horizon {

// Full-depth 2D orthonormal Haar coefficients in Mallat layout: the single
// approximation coefficient sits at (0, 0); level-s details occupy the
// quadrants [2^s, 2^{s+1}) of the n x n array.
struct WaveletCoeffs {
  int n = 0;
  int levels = 0;
  ImageGrid coeffs;
};

bool is_power_of_two(int n);

// Separable transform, alternating one row pass and one column pass per
// level on the shrinking low-pass block. Throws NotPowerOfTwo (n < 2 or not
// a power of two).
WaveletCoeffs haar2_forward(const ImageGrid& image);
ImageGrid haar2_inverse(const WaveletCoeffs& coeffs);

// Keep coefficients with |c| > theta; the approximation coefficient is kept
// regardless. Throws InvalidArgument for theta < 0.
WaveletCoeffs hard_threshold(const WaveletCoeffs& coeffs, double theta);

// sigma * sqrt(2 ln(n^2)).
double universal_threshold(int n, double sigma);

// Inverse of the thresholded transform of `noisy` at the universal threshold.
ImageGrid wavelet_denoise(const ImageGrid& noisy, double sigma);

}  // namespace horizon
