#pragma once

#include <cstdint>
#include <string_view>

namespace pulsefield {

/// SplitMix64 output function. Bijective on 64-bit words.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// FNV-1a over a stream name, used to derive substream keys.
[[nodiscard]] constexpr std::uint64_t name_hash(std::string_view name) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/**
 * Counter-based generator: the i-th draw of a stream is
 * mix64(key + (i + 1) * 0x9E3779B97F4A7C15), so any draw can be computed
 * without generating its predecessors. Substreams are keyed by
 * (seed, name, index); e.g. the dilations of level j come from
 * stream(seed, "B", j) and never depend on how many levels exist.
 */
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  /// Substream for a named purpose and an integer index (level, trial...).
  [[nodiscard]] static constexpr CounterRng stream(std::uint64_t seed, std::string_view name,
                                                   std::uint64_t index = 0) noexcept {
    return CounterRng(mix64(mix64(seed ^ name_hash(name)) + index * kGolden + 1));
  }

  [[nodiscard]] constexpr std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * kGolden);
  }

  constexpr std::uint64_t next_u64() noexcept { return at(counter_++); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform_open0() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Unit-mean exponential by inversion.
  double exponential();

  [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }
  [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Poisson(mean) draw obtained by counting unit-rate exponential gaps that
/// fit in [0, mean]. Exact for any mean; O(mean) work.
[[nodiscard]] long poisson_by_gaps(CounterRng& rng, double mean);

}  // namespace pulsefield
