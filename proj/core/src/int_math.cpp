#include "strata/int_math.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace strata {
namespace {

using u128 = unsigned __int128;

// Compares v^a against target, saturating overflow as "greater". Requires
// v >= 1.
int cmp_pow_u128(std::uint64_t v, unsigned a, u128 target) {
  u128 acc = 1;
  const u128 lim = ~static_cast<u128>(0);
  for (unsigned i = 0; i < a; ++i) {
    if (acc > lim / v) return 1;
    acc *= v;
    if (acc > target) return 1;  // v >= 1, acc never shrinks
  }
  return acc == target ? 0 : -1;
}

// target = base^exp when it fits in 127 bits, else nullopt.
bool pow_fits_u128(std::uint64_t base, unsigned exp) {
  return static_cast<unsigned>(std::bit_width(base)) * exp <= 126;
}

u128 pow_u128(std::uint64_t base, unsigned exp) {
  u128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) acc *= base;
  return acc;
}

// Fixed-capacity unsigned magnitude arithmetic for the cases that exceed 128
// bits. Exponents stay <= 64, so v^a for 64-bit v needs at most 65 limbs; 130
// covers every intermediate product. Stack-only and size-aware: these run in
// tight per-deposit loops.
struct Wide {
  std::array<std::uint64_t, 130> limb;
  unsigned size = 0;
};

void set_u64(Wide& w, std::uint64_t v) {
  w.size = v ? 1 : 0;
  w.limb[0] = v;
}

void assign(Wide& dst, const Wide& src) {
  std::copy_n(src.limb.begin(), src.size, dst.limb.begin());
  dst.size = src.size;
}

void mul(const Wide& a, const Wide& b, Wide& out) {
  if (a.size == 0 || b.size == 0) {
    out.size = 0;
    return;
  }
  const unsigned n = a.size + b.size;
  assert(n <= out.limb.size());
  std::fill(out.limb.begin(), out.limb.begin() + n, 0);
  for (unsigned i = 0; i < a.size; ++i) {
    u128 carry = 0;
    for (unsigned j = 0; j < b.size; ++j) {
      u128 cur = static_cast<u128>(a.limb[i]) * b.limb[j] + out.limb[i + j] + carry;
      out.limb[i + j] = static_cast<std::uint64_t>(cur);
      carry = cur >> 64;
    }
    out.limb[i + b.size] = static_cast<std::uint64_t>(carry);
  }
  out.size = n;
  while (out.size && out.limb[out.size - 1] == 0) --out.size;
}

void pow_wide(std::uint64_t base, unsigned exp, Wide& out) {
  set_u64(out, 1);
  Wide acc, tmp;
  set_u64(acc, base);
  while (exp) {
    if (exp & 1u) {
      mul(out, acc, tmp);
      assign(out, tmp);
    }
    exp >>= 1u;
    if (exp) {
      mul(acc, acc, tmp);
      assign(acc, tmp);
    }
  }
}

int cmp(const Wide& a, const Wide& b) {
  if (a.size != b.size) return a.size < b.size ? -1 : 1;
  for (unsigned i = a.size; i-- > 0;) {
    if (a.limb[i] != b.limb[i]) return a.limb[i] < b.limb[i] ? -1 : 1;
  }
  return 0;
}

// Minimal v in [lo, hi] with pred(v) true; pred must be monotone and
// pred(hi) true. An estimate (if bracketable) narrows the range first.
template <typename Pred>
std::uint64_t search_min(std::uint64_t lo, std::uint64_t hi, long double est, Pred pred) {
  if (est >= static_cast<long double>(lo) && est < static_cast<long double>(hi)) {
    std::uint64_t guess = static_cast<std::uint64_t>(est);
    std::uint64_t bl = guess > 2 && guess - 2 > lo ? guess - 2 : lo;
    std::uint64_t bh = guess + 2 < hi ? guess + 2 : hi;
    if ((bl == lo || !pred(bl - 1)) && pred(bh)) {
      lo = bl;
      hi = bh;
    }
  }
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace

std::uint64_t ceil_root_pow(std::uint64_t n, unsigned j, unsigned a) {
  assert(a >= 1 && a <= 64 && j <= a);
  if (n == 0) return j == 0 ? 1 : 0;
  if (j == 0 || n == 1) return 1;
  if (j == a) return n;

  long double est = std::exp2(static_cast<double>(j) / static_cast<double>(a) *
                              std::log2(static_cast<double>(n)));
  if (pow_fits_u128(n, j)) {
    const u128 target = pow_u128(n, j);
    return search_min(1, n, est,
                      [&](std::uint64_t v) { return cmp_pow_u128(v, a, target) >= 0; });
  }
  Wide target, scratch;
  pow_wide(n, j, target);
  return search_min(1, n, est, [&](std::uint64_t v) {
    pow_wide(v, a, scratch);
    return cmp(scratch, target) >= 0;
  });
}

std::uint64_t floor_mul_root(std::uint64_t x, std::uint64_t n, unsigned a) {
  assert(a >= 1 && a <= 64);
  if (x == 0 || n == 0) return 0;
  if (n == 1) return x;

  std::uint64_t hi;
  {
    // x * 2^ceil(log2(n)/a) + 1 brackets x * n^(1/a) from above.
    unsigned shift = (ceil_log2_succ(n - 1) + a - 1) / a;
    if (shift >= 64 || x > (std::numeric_limits<std::uint64_t>::max() >> shift)) {
      hi = std::numeric_limits<std::uint64_t>::max();
    } else {
      hi = (x << shift) + 1;
    }
  }
  long double est = static_cast<long double>(x) *
                    std::exp2(std::log2(static_cast<double>(n)) / static_cast<double>(a));

  // Largest v with v^a <= x^a * n; search_min finds the first v past it.
  if (static_cast<unsigned>(std::bit_width(x)) * a +
          static_cast<unsigned>(std::bit_width(n)) <=
      126) {
    const u128 target = pow_u128(x, a) * n;
    if (cmp_pow_u128(hi, a, target) <= 0) return hi;
    std::uint64_t first_over = search_min(x, hi, est + 1.0L, [&](std::uint64_t v) {
      return cmp_pow_u128(v, a, target) > 0;
    });
    return first_over - 1;
  }
  Wide target, scratch;
  pow_wide(x, a, target);
  {
    Wide factor, tmp;
    set_u64(factor, n);
    mul(target, factor, tmp);
    assign(target, tmp);
  }
  auto over = [&](std::uint64_t v) {
    pow_wide(v, a, scratch);
    return cmp(scratch, target) > 0;
  };
  if (!over(hi)) return hi;
  std::uint64_t first_over = search_min(x, hi, est + 1.0L, over);
  return first_over - 1;
}

std::uint64_t sat_mul_add(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  u128 v = static_cast<u128>(a) * b + c;
  if (v > std::numeric_limits<std::uint64_t>::max()) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace strata
