#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace ubsr {

/**
 * SplitMix64: a counter-based 64-bit generator. The k-th output is
 * mix(s0 + k * 0x9E3779B97F4A7C15) where s0 = mix(seed), so any output can be
 * recomputed from (seed, k) alone.
 *
 * Stream-splitting rule: independent trial i of an experiment with base seed
 * b uses seed b + i. Hashing the seed into s0 places those streams at
 * unrelated offsets of the 2^64 Weyl cycle.
 */
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  static constexpr std::string_view kName = "splitmix64";

  explicit SplitMix64(std::uint64_t seed) : state_(mix(seed)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) via Lemire's multiply-shift rejection.
  std::uint64_t below(std::uint64_t bound);

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

/// Seed for trial `trial` under the per-trial stream-splitting rule.
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) {
  return base_seed + trial;
}

}  // namespace ubsr
