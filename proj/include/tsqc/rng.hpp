#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace tsqc {

/// SplitMix64 (Steele, Lea & Flood 2014; Vigna's constants). All reports
/// record `algorithm_id` so another implementation of the same generator can
/// reproduce them bit for bit.
///
/// Floating-point draws are derived here rather than through
/// <random> distributions, whose algorithms differ between standard
/// libraries.
class SplitMix64 {
 public:
  static constexpr std::string_view algorithm_id = "splitmix64";

  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed), seed_(seed) {}

  /// Finalizer of SplitMix64; also used to derive stream seeds.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
  }

  /// Seed of substream `index` under `seed`:
  /// mix(seed ^ mix(index + 0x632BE59BD9B4E019)).
  static constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix(seed ^ mix(index + UINT64_C(0x632BE59BD9B4E019)));
  }

  /// Independent generator for substream `index` of this generator's seed.
  /// Does not advance *this.
  [[nodiscard]] constexpr SplitMix64 split(std::uint64_t index) const noexcept {
    return SplitMix64(stream_seed(seed_, index));
  }

  constexpr std::uint64_t next() noexcept {
    state_ += UINT64_C(0x9E3779B97F4A7C15);
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), unbiased (modulo with rejection of the
  /// short final interval).
  constexpr std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  /// Standard normal by Box-Muller; each call consumes two draws.
  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // UniformRandomBitGenerator
  using result_type = std::uint64_t;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  constexpr result_type operator()() noexcept { return next(); }

 private:
  std::uint64_t state_;
  std::uint64_t seed_;
};

}  // namespace tsqc
