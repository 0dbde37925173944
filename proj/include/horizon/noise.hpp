#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "horizon/image.hpp"

namespace horizon {

// Philox4x32-10 counter-based generator (Salmon et al., Random123). A block
// of four 32-bit words is a pure function of (key, counter), so any draw can
// be reproduced without replaying a stream.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter block(Counter ctr, Key key);
};

// Name and version recorded in result metadata.
inline constexpr std::string_view kGeneratorName = "philox4x32-10+box-muller/v1";

// Standard normal variate addressed by (seed, stream, index). Uses the two
// 64-bit halves of one Philox block as uniforms in (0,1) and returns the
// cosine branch of Box-Muller.
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
// Uniform in (0,1). Shares its Philox block with counter_normal at the same
// address; draw both from distinct streams.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Sequential view over one (seed, stream) substream.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
  double operator()() { return counter_normal(seed_, stream_, next_++); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t next_ = 0;
};

struct NoiseSpec {
  double sigma = 1.0;
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

// z(i, j) for the given trial: sigma * counter_normal keyed by the master
// seed, with the trial index as the stream and the pixel coordinates as the
// in-stream index.
double noise_value(const NoiseSpec& spec, int i, int j);

// y = x + z. Deterministic in (spec, image size).
ImageGrid add_noise(const ImageGrid& image, const NoiseSpec& spec);

}  // namespace horizon
