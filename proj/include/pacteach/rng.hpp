#pragma once

#include <cstdint>

namespace pacteach {

// SplitMix64 (Steele/Lea/Flood; the java.util.SplittableRandom mixer).
// Chosen over <random> engines because its output sequence is fixed by
// these few lines -- identical on every platform and toolchain -- and
// because streams can be split by arithmetic on the seed, which is how
// simulation trials are decorrelated for parallel runs.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Seed for the i-th simulation trial: the i-th output (1-based) of the
// SplitMix64 stream started at `master`. O(1), so workers can jump
// straight to their trial ranges.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  SplitMix64 g(master + trial * 0x9E3779B97F4A7C15ULL);
  return g.next();
}

}  // namespace pacteach
