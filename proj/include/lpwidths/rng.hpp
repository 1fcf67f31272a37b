#pragma once

#include <cmath>
#include <cstdint>

namespace lpwidths {

// Identifies one reproducible random stream.  Equal (seed, stream_id) pairs
// replay the identical uint64 sequence; workers use consecutive stream ids.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// xoshiro256++ generator, state expanded from (seed, stream_id) with two
/// splitmix64 chains.  The integer stream is platform independent; derived
/// real variates are bit-exact per platform/libm build.
class Rng {
 public:
  explicit Rng(RngState state) {
    std::uint64_t a = state.seed;
    std::uint64_t b = state.stream_id ^ 0x6a09e667f3bcc909ULL;
    for (int i = 0; i < 4; ++i) s_[i] = splitmix64(a) ^ splitmix64(b);
    bool all_zero = true;
    for (std::uint64_t w : s_) all_zero &= (w == 0);
    if (all_zero) s_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1); never returns an endpoint, safe under log().
  double uniform_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal variate by the Marsaglia polar method (spare discarded).
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform01() - 1.0;
      const double v = 2.0 * uniform01() - 1.0;
      const double s = u * u + v * v;
      if (s < 1.0 && s > 0.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t s_[4];
};

}  // namespace lpwidths
