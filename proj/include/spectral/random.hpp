#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spectral {

/// SplitMix64. Every seeded quantity in the library comes from this stream so
/// that results can be reproduced bit-for-bit in other languages.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += kGamma;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on (0, 1]: the top 53 bits, shifted up by one ulp.
  double uniform() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller; consumes exactly two draws.
  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Index in [0, n) by modulo reduction.
  std::uint64_t below(std::uint64_t n) noexcept { return next() % n; }

 private:
  std::uint64_t state_;
};

/// Seed of the `index`-th independent sub-stream of `seed`: the first output
/// of SplitMix64 started at seed + index * gamma.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return SplitMix64(seed + index * SplitMix64::kGamma).next();
}

}  // namespace spectral
