#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kmpp {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Per-trial seed from (master seed, strategy name, trial index). Independent of the
/// order in which strategies are listed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view strategy,
                                    std::uint64_t trial) noexcept {
  return mix64(mix64(master ^ fnv1a(strategy)) ^ mix64(trial + 0x632be59bd9b4e019ULL));
}

/// Deterministic generator: std::mt19937_64 engine, with integer and real
/// draws derived by fixed formulas so output does not depend on the standard
/// library's distribution implementations. Counts raw engine draws consumed by
/// index()/uniform01().
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform integer in [0, n), n >= 1, by rejection.
  std::uint64_t index(std::uint64_t n) {
    ++draws_;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01() {
    ++draws_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Number of index()/uniform01() calls made so far.
  std::uint64_t draws() const noexcept { return draws_; }

private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

} // namespace kmpp
