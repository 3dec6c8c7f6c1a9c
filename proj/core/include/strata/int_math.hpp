#pragma once

#include <bit>
#include <cassert>
#include <cstdint>

namespace strata {

// Largest power of two <= x. Callers must clamp x to >= 1 first.
inline std::uint64_t floor_pow2(std::uint64_t x) {
  assert(x >= 1 && "floor_pow2 requires x >= 1");
  return std::bit_floor(x);
}

// floor(log2(x)) for x >= 1.
inline unsigned floor_log2(std::uint64_t x) {
  assert(x >= 1);
  return static_cast<unsigned>(std::bit_width(x)) - 1u;
}

// ceil(log2(n + 1)); equals the bit count of n, with 0 -> 0.
inline unsigned ceil_log2_succ(std::uint64_t n) {
  return static_cast<unsigned>(std::bit_width(n));
}

// ceil(n^(j/a)): smallest v >= 1 with v^a >= n^j. Exact for all 64-bit n,
// j <= a <= 64. Returns 0 for n == 0, j >= 1.
std::uint64_t ceil_root_pow(std::uint64_t n, unsigned j, unsigned a);

// floor(x * n^(1/a)): largest v with v^a <= x^a * n. Exact; saturates at
// UINT64_MAX if the value does not fit.
std::uint64_t floor_mul_root(std::uint64_t x, std::uint64_t n, unsigned a);

// a * b + c clamped to UINT64_MAX.
std::uint64_t sat_mul_add(std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace strata
