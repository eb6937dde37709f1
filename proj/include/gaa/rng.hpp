#pragma once

#include <cstdint>
#include <random>

namespace gaa {

// Instance generator: std::mt19937_64 seeded with the 64-bit seed, with an
// explicit rejection step for range reduction. std::uniform_int_distribution
// is not used because its output is implementation-defined; this keeps
// instances bit-identical across standard libraries.
class WeightRng {
 public:
  explicit WeightRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer on [0, max_value].
  std::int64_t uniform(std::int64_t max_value) {
    if (max_value <= 0) return 0;
    const std::uint64_t bound = static_cast<std::uint64_t>(max_value) + 1;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return static_cast<std::int64_t>(r % bound);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer, used to derive independent per-trial seeds from a
// study seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace gaa
