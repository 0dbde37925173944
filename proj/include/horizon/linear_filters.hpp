#pragma once

#include <complex>
#include <vector>

#include "horizon/image.hpp"

namespace horizon {

// Convolution kernel g(m, l) for m, l in [-halfwidth, halfwidth]. Weights are
// stored row-major in l: weight(m, l) = weights[(l + hw) * (2 hw + 1) + (m + hw)].
// Construction enforces unit sum within 1e-12.
class Kernel {
 public:
  Kernel(int halfwidth, std::vector<double> weights);

  int halfwidth() const { return hw_; }
  int width() const { return 2 * hw_ + 1; }
  double operator()(int m, int l) const {
    return w_[static_cast<std::size_t>((l + hw_) * width() + (m + hw_))];
  }
  const std::vector<double>& weights() const { return w_; }

  // g(m,l) = g(-m,l) = g(m,-l) within tol.
  bool is_symmetric(double tol = 1e-12) const;
  // Kernel rotated by 90 degrees: g'(m, l) = g(-l, m).
  Kernel rotated90() const;

 private:
  int hw_;
  std::vector<double> w_;
};

Kernel box_kernel(int halfwidth);
Kernel identity_kernel();

// Direct periodic convolution:
//   out(i,j) = sum_{m,l} g(m,l) * y((i-m) mod n, (j-l) mod n).
// Throws KernelTooLarge when 2*hw+1 > n.
ImageGrid convolve_periodic(const ImageGrid& image, const Kernel& kernel);

// Same result through DFT-domain multiplication (FFTW).
ImageGrid convolve_dft(const ImageGrid& image, const Kernel& kernel);

// Box filter by separable running sums; equal to
// convolve_periodic(image, box_kernel(hw)) up to rounding.
ImageGrid box_filter(const ImageGrid& image, int halfwidth);

// Values over DFT indices (k1, k2) in [0, n)^2, stored row-major in k2.
struct FrequencyResponse {
  int n = 0;
  std::vector<std::complex<double>> values;

  std::complex<double> operator()(int k1, int k2) const {
    return values[static_cast<std::size_t>(k2) * n + k1];
  }
  std::complex<double>& operator()(int k1, int k2) {
    return values[static_cast<std::size_t>(k2) * n + k1];
  }
};

// X(k1,k2) = (1/n) sum_{l1,l2} x(l1,l2) e^{-j2pi k1 l1/n} e^{-j2pi k2 l2/n}.
// With this normalization the 2D DFT is unitary.
FrequencyResponse dft2(const ImageGrid& image);
// Inverse of dft2; returns the real part.
ImageGrid idft2(const FrequencyResponse& spectrum);

// Unnormalized transform G(k1,k2) = sum g(m,l) e^{-j2pi(k1 m + k2 l)/n} of the
// kernel wrapped onto the n x n torus, so that dft2(g * y) = G . dft2(y)
// and G(0,0) = sum g = 1.
FrequencyResponse kernel_response(const Kernel& kernel, int n);

// Closed-form DFT of the h = 1/2 Horizon image (n even):
// zero for k1 != 0, (1 - e^{-j pi k2}) / (1 - e^{-j 2 pi k2 / n}) for k1 = 0,
// and n/2 at the origin. Throws OddN.
FrequencyResponse halfplane_dft(int n);

// Row response that minimizes the dominant term of the linear-filter risk
// lower bound: 1 at k2 = 0, 0 at even k2, 1/(1 + 4 pi^4 sigma^2 k2^3 / n^2) at
// odd k2. Indexed by k2 in [0, n).
std::vector<double> optimal_row_response(int n, double sigma);

// Leading term of the bias lower bound for the optimal row response:
// (4 pi^4 sigma^2 / (1 + 4 pi^4 sigma^2))^2 * n^{-2/3} / 40.
double linear_bias_floor(int n, double sigma);

// max over frequency samples of |G(w) - ring mean|, rings of equal radius
// binned at resolution 2 pi / n. Zero for an isotropic response.
double isotropy_deviation(const Kernel& kernel, int n);

// max over frequency samples of ||grad G(w1, w2)||_2 for the continuous
// response sum g(m,l) e^{-j(w1 m + w2 l)}.
double response_gradient_norm(const Kernel& kernel, int n);
// Validator for the bounded-gradient hypothesis with a caller-chosen bound.
bool satisfies_gradient_bound(const Kernel& kernel, int n, double bound);

}  // namespace horizon
