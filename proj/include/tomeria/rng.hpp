#pragma once

#include <cstdint>

namespace tomeria {

/// SplitMix64 (Steele, Lea & Flood). This is the pinned generator for every
/// random draw in the project; outputs must be bit-identical on all platforms.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Top 53 bits mapped to [0,1).
  constexpr double next_unit() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Unbiased integer in [0, bound) by rejection; bound must be nonzero.
  constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % bound;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed and a purpose tag.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  SplitMix64 mix(seed ^ (tag * 0xD1B54A32D192ED03ULL));
  return mix.next();
}

}  // namespace tomeria
