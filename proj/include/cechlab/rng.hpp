#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace cechlab {

/// Counter-based random stream.
///
/// Each stream is identified by a 64-bit key derived from a root seed and a
/// path of stream ids; the i-th output is a bijective mix of (key, i). Streams
/// with different paths are statistically independent, so trials can be
/// dispatched in any order and still reproduce bit-for-bit.
///
/// Satisfies UniformRandomBitGenerator, so it plugs into <random>
/// distributions.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) : key_(mix(seed ^ kSeedSalt)) {}

  /// Derives an independent child stream. The parent is not advanced.
  RandomStream split(std::uint64_t id) const {
    RandomStream child(0);
    child.key_ = mix(key_ ^ mix(id + kGolden));
    return child;
  }

  RandomStream split(std::initializer_list<std::uint64_t> path) const {
    RandomStream s = *this;
    for (auto id : path) s = s.split(id);
    return s;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGolden * ++counter_); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one value per call, second discarded).
  double normal();

  std::uint64_t counter() const noexcept { return counter_; }
  std::uint64_t key() const noexcept { return key_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x5851f42d4c957f2dULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cechlab
