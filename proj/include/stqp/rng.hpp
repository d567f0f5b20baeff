#pragma once

// Counter-based random streams.
//
// Every stream is keyed by (seed, a, b, c) through a chain of SplitMix64
// finalizers; draw k of a stream is mix64(key + k * golden). A matrix entry
// (i, j) of trial t is therefore a pure function of (seed, t, i, j), which is
// what makes parallel trial generation bit-stable.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace stqp {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterStream {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  constexpr CounterStream(std::uint64_t seed, std::uint64_t a = 0,
                          std::uint64_t b = 0, std::uint64_t c = 0) noexcept
      : key_(derive(derive(derive(mix64(seed + kGolden), a), b), c)) {}

  constexpr std::uint64_t next() noexcept {
    return mix64(key_ + (++counter_) * kGolden);
  }

  /// Uniform double strictly inside (0, 1), 53 bits of resolution.
  constexpr double uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the Box-Muller cosine branch (two uniforms per draw).
  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Integer uniform on [0, bound), bound > 0. Multiply-shift; bias < 2^-32
  /// for the small bounds used here.
  std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  static constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t v) noexcept {
    return mix64(key ^ mix64(v + 0x632be59bd9b4e019ULL));
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace stqp
