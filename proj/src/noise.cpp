#include "horizon/noise.hpp"

#include <cmath>
#include <numbers>

namespace horizon {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// 53-bit uniform strictly inside (0,1).
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

Philox4x32::Counter draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return Philox4x32::block(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto w = draw(seed, stream, index);
  return to_open_unit(w[0], w[1]);
}

double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto w = draw(seed, stream, index);
  const double u1 = to_open_unit(w[0], w[1]);
  const double u2 = to_open_unit(w[2], w[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double noise_value(const NoiseSpec& spec, int i, int j) {
  const std::uint64_t index = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                              static_cast<std::uint32_t>(j);
  return spec.sigma * counter_normal(spec.master_seed, spec.trial_index, index);
}

ImageGrid add_noise(const ImageGrid& image, const NoiseSpec& spec) {
  if (!(spec.sigma > 0.0)) throw InvalidArgument("add_noise: sigma must be > 0");
  ImageGrid out = image;
  const int n = image.n();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) out(i, j) += noise_value(spec, i, j);
  }
  return out;
}

}  // namespace horizon
