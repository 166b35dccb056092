#pragma once

#include <cstdint>

namespace chfs {

/// Counter-based 64-bit generator: the SplitMix64 finalizer applied to
/// seed + (index+1) * golden-ratio increment. Stateless per index, so the
/// value at node i depends only on (seed, i) and is identical across
/// platforms and languages. Golden values are pinned in the test suite.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Map 64 random bits to a double in [0, 1) with 53-bit resolution.
inline double unit_real(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform value in [-1, 1) at (seed, index).
inline double symmetric_unit(std::uint64_t seed, std::uint64_t index) {
  return 2.0 * unit_real(counter_hash(seed, index)) - 1.0;
}

}  // namespace chfs
