#pragma once

#include <cstdint>
#include <initializer_list>

namespace qnet {

// splitmix64: counter-style generator with a 64-bit state.  Every stochastic
// draw in the library goes through this so that ensemble members can be
// re-seeded independently of evaluation order and of the platform's
// <random> distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [-half_width, half_width].
  double uniform_symmetric(double half_width) {
    return half_width * (2.0 * uniform01() - 1.0);
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed plus coordinates
/// (grid indices, replicate number).  Same inputs always give the same seed.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> coords) {
  SplitMix64 mix(base);
  std::uint64_t h = mix.next();
  for (std::uint64_t c : coords) {
    SplitMix64 step(h ^ (c * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull));
    h = step.next();
  }
  return h;
}

}  // namespace qnet
