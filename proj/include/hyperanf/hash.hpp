#pragma once

#include <cstdint>

namespace hyperanf {

// 64-bit finaliser with full avalanche (murmur3-style fmix64).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

// Hash of an item under a seed. The seed is mixed before it touches the
// item so that consecutive seeds give decorrelated streams; every output
// bit avalanches on every input bit of both arguments.
constexpr std::uint64_t item_hash(std::uint64_t item, std::uint64_t seed) noexcept {
  return mix64(item ^ mix64(seed ^ 0x9e3779b97f4a7c15ULL));
}

// Deterministic sequential generator (splitmix64). Used by the graph
// generators and the test harnesses instead of <random> distributions,
// whose output is implementation-defined.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  // Uniform value in [0, bound); bound > 0. Multiply-shift reduction.
  constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Uniform double in [0, 1).
  constexpr double next_double() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace hyperanf
