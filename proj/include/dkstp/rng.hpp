#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace dkstp {

// Deterministic, portable random number generation.  Every random object in
// the library (measurement matrices, noise, sampling) is derived from a u64
// seed through these generators, so results are reproducible across runs and
// platforms independent of the C++ standard library implementation.
//
// Frozen algorithms:
//   - state expansion: SplitMix64 (Steele/Lea/Flood mixing constants)
//   - stream generation: xoshiro256++ 1.0 (Blackman/Vigna)
//   - uniform doubles: top 53 bits scaled by 2^-53, giving [0, 1)
//   - normals: Marsaglia polar method, spare value cached
//   - random signs: top bit of the next u64

struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t next() {
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
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, q;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    const double f = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // +1.0 or -1.0 with equal probability.
  double sign_unit() { return (next() >> 63) ? -1.0 : 1.0; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent child seed from a base seed and a list of tags
// (trial index, method index, ...).  Chained SplitMix64 absorption; used to
// give every benchmark cell / noise draw its own stream.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> tags) {
  SplitMix64 sm{base};
  std::uint64_t h = sm.next();
  for (std::uint64_t t : tags) {
    SplitMix64 mix{h ^ (t + 0x9E3779B97F4A7C15ULL)};
    h = mix.next();
  }
  return h;
}

}  // namespace dkstp
