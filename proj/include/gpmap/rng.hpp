#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace gpmap {

// splitmix64 step (Vigna); used for seeding and for combining seed material.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Order-sensitive combination of two 64-bit values via splitmix64 chaining.
std::uint64_t mix(std::uint64_t a, std::uint64_t b);

// FNV-1a over the bytes of a string; used to hash tuple identifiers into seeds.
std::uint64_t fnv1a(std::string_view s);

// Bit pattern of a double as seed material (so non-integer sizes still hash stably).
std::uint64_t seed_from_double(double v);

// xoshiro256** (Blackman & Vigna, public domain), state initialized with four
// consecutive splitmix64 outputs of the seed. Chosen over std::mt19937 because the
// output stream must be bit-identical across platforms and standard-library builds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1): top 53 bits scaled by 2^-53.
  double next_double();

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform index in [0, n); plain modulo (bias is negligible for the small n used
  // here and the mapping is trivially portable). n must be > 0.
  std::size_t next_index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

 private:
  std::uint64_t s_[4];
};

}  // namespace gpmap
