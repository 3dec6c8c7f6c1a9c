#pragma once

#include <cstdint>

namespace strata {

// splitmix64 (Steele, Lea, Flood). Stable across platforms, one word of
// state, and forkable: fork() derives an independent child stream from the
// next draw, so replays are deterministic given the original seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, bound). bound must be >= 1.
  std::uint64_t below(std::uint64_t bound) {
    // Modulo bias is negligible for the population sizes used here and keeps
    // the stream layout simple and reproducible.
    return next() % bound;
  }

  SplitMix64 fork() { return SplitMix64(next()); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace strata
