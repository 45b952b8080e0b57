#pragma once

#include <cstdint>

namespace nlc {

/// splitmix64 generator: 64-bit state, platform-independent output fully
/// determined by the seed. Every stochastic routine in the library takes
/// one of these explicitly; there is no hidden global generator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform k-bit value, 1 <= k <= 32 (low bits of one draw).
  std::uint32_t next_bits(unsigned k) {
    return static_cast<std::uint32_t>(next() & ((k >= 64 ? 0 : (1ull << k)) - 1ull));
  }

 private:
  std::uint64_t state_;
};

}  // namespace nlc
