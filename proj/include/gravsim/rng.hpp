#pragma once

#include <cstdint>

namespace gravsim {

// splitmix64. Chosen because it is tiny, well mixed, and produces identical
// streams on every platform, which the reproducibility contract depends on.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53 mantissa bits
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace gravsim
