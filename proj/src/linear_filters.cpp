#include "horizon/linear_filters.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace horizon {

namespace {

using cd = std::complex<double>;

// The FFTW planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_fits(int hw, int n, const char* who) {
  if (2 * hw + 1 > n) {
    throw KernelTooLarge(std::string(who) + ": kernel width " + std::to_string(2 * hw + 1) +
                         " exceeds image size " + std::to_string(n));
  }
}

int signed_freq(int k, int n) { return k > n / 2 ? k - n : k; }

// Sum over kernel taps of factor(m, l) * g(m, l) * e^{-j 2 pi (k1 m + k2 l)/n}.
template <class Factor>
FrequencyResponse sample_response(const Kernel& g, int n, Factor factor) {
  FrequencyResponse r{n, std::vector<cd>(static_cast<std::size_t>(n) * n)};
  const int hw = g.halfwidth();
  for (int k2 = 0; k2 < n; ++k2) {
    for (int k1 = 0; k1 < n; ++k1) {
      cd acc = 0.0;
      for (int l = -hw; l <= hw; ++l) {
        for (int m = -hw; m <= hw; ++m) {
          const double phase = -2.0 * std::numbers::pi * (static_cast<double>(k1) * m + k2 * l) / n;
          acc += factor(m, l) * g(m, l) * std::polar(1.0, phase);
        }
      }
      r(k1, k2) = acc;
    }
  }
  return r;
}

}  // namespace

Kernel::Kernel(int halfwidth, std::vector<double> weights) : hw_(halfwidth), w_(std::move(weights)) {
  if (hw_ < 0) throw InvalidArgument("Kernel: halfwidth must be >= 0");
  if (w_.size() != static_cast<std::size_t>(width()) * width()) {
    throw InvalidArgument("Kernel: expected (2*halfwidth+1)^2 weights");
  }
  double s = 0.0;
  for (double v : w_) s += v;
  if (std::abs(s - 1.0) > 1e-12) {
    throw InvalidArgument("Kernel: weights sum to " + std::to_string(s) + ", expected 1");
  }
}

bool Kernel::is_symmetric(double tol) const {
  for (int l = -hw_; l <= hw_; ++l) {
    for (int m = -hw_; m <= hw_; ++m) {
      const double v = (*this)(m, l);
      if (std::abs(v - (*this)(-m, l)) > tol || std::abs(v - (*this)(m, -l)) > tol) return false;
    }
  }
  return true;
}

Kernel Kernel::rotated90() const {
  std::vector<double> w(w_.size());
  for (int l = -hw_; l <= hw_; ++l) {
    for (int m = -hw_; m <= hw_; ++m) {
      w[static_cast<std::size_t>((l + hw_) * width() + (m + hw_))] = (*this)(-l, m);
    }
  }
  return Kernel(hw_, std::move(w));
}

Kernel box_kernel(int halfwidth) {
  if (halfwidth < 0) throw InvalidArgument("box_kernel: halfwidth must be >= 0");
  const int w = 2 * halfwidth + 1;
  return Kernel(halfwidth, std::vector<double>(static_cast<std::size_t>(w) * w, 1.0 / (w * w)));
}

Kernel identity_kernel() { return Kernel(0, {1.0}); }

ImageGrid convolve_periodic(const ImageGrid& image, const Kernel& kernel) {
  const int n = image.n();
  const int hw = kernel.halfwidth();
  require_fits(hw, n, "convolve_periodic");
  ImageGrid out(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int l = -hw; l <= hw; ++l) {
        for (int m = -hw; m <= hw; ++m) acc += kernel(m, l) * image.wrapped(i - m, j - l);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

FrequencyResponse dft2(const ImageGrid& image) {
  const int n = image.n();
  const std::size_t count = static_cast<std::size_t>(n) * n;
  auto* in = fftw_alloc_complex(count);
  auto* out = fftw_alloc_complex(count);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  const auto v = image.values();
  for (std::size_t k = 0; k < count; ++k) {
    in[k][0] = v[k];
    in[k][1] = 0.0;
  }
  fftw_execute(plan);
  FrequencyResponse r{n, std::vector<cd>(count)};
  for (std::size_t k = 0; k < count; ++k) r.values[k] = cd(out[k][0], out[k][1]) / double(n);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return r;
}

ImageGrid idft2(const FrequencyResponse& spectrum) {
  const int n = spectrum.n;
  const std::size_t count = static_cast<std::size_t>(n) * n;
  auto* in = fftw_alloc_complex(count);
  auto* out = fftw_alloc_complex(count);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < count; ++k) {
    in[k][0] = spectrum.values[k].real();
    in[k][1] = spectrum.values[k].imag();
  }
  fftw_execute(plan);
  ImageGrid img(n);
  auto v = img.values();
  for (std::size_t k = 0; k < count; ++k) v[k] = out[k][0] / n;
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return img;
}

FrequencyResponse kernel_response(const Kernel& kernel, int n) {
  return sample_response(kernel, n, [](int, int) { return cd(1.0); });
}

ImageGrid convolve_dft(const ImageGrid& image, const Kernel& kernel) {
  const int n = image.n();
  require_fits(kernel.halfwidth(), n, "convolve_dft");
  FrequencyResponse y = dft2(image);
  const FrequencyResponse g = kernel_response(kernel, n);
  for (std::size_t k = 0; k < y.values.size(); ++k) y.values[k] *= g.values[k];
  return idft2(y);
}

ImageGrid box_filter(const ImageGrid& image, int halfwidth) {
  const int n = image.n();
  if (halfwidth < 0) throw InvalidArgument("box_filter: halfwidth must be >= 0");
  require_fits(halfwidth, n, "box_filter");
  const int w = 2 * halfwidth + 1;
  ImageGrid rows(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int u = -halfwidth; u <= halfwidth; ++u) s += image.wrapped(u, j);
    rows(0, j) = s;
    for (int i = 1; i < n; ++i) {
      s += image.wrapped(i + halfwidth, j) - image.wrapped(i - halfwidth - 1, j);
      rows(i, j) = s;
    }
  }
  ImageGrid out(n);
  const double scale = 1.0 / (static_cast<double>(w) * w);
  std::vector<double> acc(n, 0.0);
  for (int v = -halfwidth; v <= halfwidth; ++v) {
    const auto r = rows.row(rows.wrap(v));
    for (int i = 0; i < n; ++i) acc[i] += r[i];
  }
  for (int j = 0; j < n; ++j) {
    if (j > 0) {
      const auto add = rows.row(rows.wrap(j + halfwidth));
      const auto sub = rows.row(rows.wrap(j - halfwidth - 1));
      for (int i = 0; i < n; ++i) acc[i] += add[i] - sub[i];
    }
    for (int i = 0; i < n; ++i) out(i, j) = acc[i] * scale;
  }
  return out;
}

FrequencyResponse halfplane_dft(int n) {
  if (n < 2 || n % 2 != 0) throw OddN("halfplane_dft: n must be even, got " + std::to_string(n));
  FrequencyResponse r{n, std::vector<cd>(static_cast<std::size_t>(n) * n, 0.0)};
  r(0, 0) = n / 2.0;
  for (int k2 = 1; k2 < n; ++k2) {
    const cd num = 1.0 - std::polar(1.0, -std::numbers::pi * k2);
    const cd den = 1.0 - std::polar(1.0, -2.0 * std::numbers::pi * k2 / n);
    r(0, k2) = k2 % 2 == 0 ? cd(0.0) : num / den;
  }
  return r;
}

std::vector<double> optimal_row_response(int n, double sigma) {
  if (n < 2) throw InvalidArgument("optimal_row_response: n must be >= 2");
  if (!(sigma > 0.0)) throw InvalidArgument("optimal_row_response: sigma must be > 0");
  const double c = 4.0 * std::pow(std::numbers::pi, 4) * sigma * sigma / (double(n) * n);
  std::vector<double> g(n, 0.0);
  g[0] = 1.0;
  for (int k = 1; k < n; k += 2) g[k] = 1.0 / (1.0 + c * std::pow(double(k), 3));
  return g;
}

double linear_bias_floor(int n, double sigma) {
  if (n < 2) throw InvalidArgument("linear_bias_floor: n must be >= 2");
  if (!(sigma > 0.0)) throw InvalidArgument("linear_bias_floor: sigma must be > 0");
  const double a = 4.0 * std::pow(std::numbers::pi, 4) * sigma * sigma;
  const double pre = a / (1.0 + a);
  return pre * pre * std::pow(double(n), -2.0 / 3.0) / 40.0;
}

double isotropy_deviation(const Kernel& kernel, int n) {
  const FrequencyResponse g = kernel_response(kernel, n);
  std::map<long, std::pair<cd, int>> rings;
  auto ring_of = [n](int k1, int k2) {
    const double a = signed_freq(k1, n), b = signed_freq(k2, n);
    return std::lround(std::sqrt(a * a + b * b));
  };
  for (int k2 = 0; k2 < n; ++k2) {
    for (int k1 = 0; k1 < n; ++k1) {
      auto& [sum, count] = rings[ring_of(k1, k2)];
      sum += g(k1, k2);
      ++count;
    }
  }
  double worst = 0.0;
  for (int k2 = 0; k2 < n; ++k2) {
    for (int k1 = 0; k1 < n; ++k1) {
      const auto& [sum, count] = rings[ring_of(k1, k2)];
      worst = std::max(worst, std::abs(g(k1, k2) - sum / double(count)));
    }
  }
  return worst;
}

double response_gradient_norm(const Kernel& kernel, int n) {
  const auto d1 = sample_response(kernel, n, [](int m, int) { return cd(0.0, -m); });
  const auto d2 = sample_response(kernel, n, [](int, int l) { return cd(0.0, -l); });
  double worst = 0.0;
  for (std::size_t k = 0; k < d1.values.size(); ++k) {
    worst = std::max(worst, std::sqrt(std::norm(d1.values[k]) + std::norm(d2.values[k])));
  }
  return worst;
}

bool satisfies_gradient_bound(const Kernel& kernel, int n, double bound) {
  return response_gradient_norm(kernel, n) <= bound;
}

}  // namespace horizon
