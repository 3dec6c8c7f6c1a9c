#include "strata/policy.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "strata/schedule.hpp"

namespace strata {
namespace {

constexpr std::uint64_t kMaxCurbCap = 1ull << 20;
constexpr std::uint64_t kMaxRootDegree = 64;

void append_multiples(std::uint64_t g, TimePoint n, std::vector<TimePoint>& out) {
  std::uint64_t count = n / g;
  out.reserve(out.size() + count + 2);
  for (std::uint64_t k = 0; k <= count; ++k) out.push_back(k * g);
  if (out.back() != n) out.push_back(n);
}

void append_depth_proportional(std::uint64_t r, TimePoint n, std::vector<TimePoint>& out) {
  if (n < r) {
    out.reserve(n + 1);
    for (TimePoint t = 0; t <= n; ++t) out.push_back(t);
    return;
  }
  append_multiples(floor_pow2(n / r), n, out);
}

void append_recency_proportional(std::uint64_t r, TimePoint n, std::vector<TimePoint>& out) {
  TimePoint t = 0;
  out.push_back(0);
  while (t < n) {
    std::uint64_t w = (n - t) / r;
    if (w == 0) {
      for (TimePoint x = t + 1; x <= n; ++x) out.push_back(x);
      return;
    }
    t += floor_pow2(w);
    out.push_back(t);
  }
}

// Geometric recency bands: band j spans recencies [tau[j-1], tau[j]) with
// tau[j] = ceil(n^(j/a)). Within a band, retained points sit on a
// power-of-two lattice anchored at time 0. The lattice pitch is floored from
// both half the band's outer edge and the band's own geometric stretch, which
// keeps per-band counts constant and nests the lattice inside lattices of any
// finer recency-proportional walk.
void append_geom_seq_nth_root(std::uint64_t degree, TimePoint n,
                              std::vector<TimePoint>& out) {
  out.push_back(0);
  if (n == 0) return;
  const unsigned a = static_cast<unsigned>(degree);
  std::vector<std::uint64_t> tau(a + 1);
  tau[0] = 1;
  for (unsigned j = 1; j <= a; ++j) tau[j] = ceil_root_pow(n, j, a);
  for (unsigned j = a; j >= 1; --j) {
    if (tau[j] <= tau[j - 1]) continue;
    std::uint64_t half = tau[j] / 2;
    std::uint64_t stretch = floor_mul_root(tau[j - 1], n, a) - tau[j - 1];
    std::uint64_t g = floor_pow2(std::max<std::uint64_t>(
        1, std::min(half, stretch)));
    TimePoint lo_time = n - tau[j];      // exclusive
    TimePoint hi_time = n - tau[j - 1];  // inclusive
    std::uint64_t first_k = lo_time / g + 1;
    std::uint64_t last_k = hi_time / g;
    for (std::uint64_t k = first_k; k <= last_k; ++k) out.push_back(k * g);
  }
  out.push_back(n);
}

bool history_free(const PolicySpec& policy) {
  switch (policy.algo()) {
    case PolicyAlgo::FixedResolution:
    case PolicyAlgo::RecencyProportional:
      return true;
    case PolicyAlgo::DepthProportional:
      return !policy.tapered();
    default:
      return false;
  }
}

}  // namespace

PolicySpec PolicySpec::fixed_resolution(std::uint64_t resolution) {
  if (resolution < 1) throw std::invalid_argument("fixed: resolution must be >= 1");
  return {PolicyAlgo::FixedResolution, resolution, false};
}

PolicySpec PolicySpec::depth_proportional(std::uint64_t resolution, bool tapered) {
  if (resolution < 1) throw std::invalid_argument("dpr: resolution must be >= 1");
  return {PolicyAlgo::DepthProportional, resolution, tapered};
}

PolicySpec PolicySpec::recency_proportional(std::uint64_t resolution) {
  if (resolution < 1) throw std::invalid_argument("rpr: resolution must be >= 1");
  return {PolicyAlgo::RecencyProportional, resolution, false};
}

PolicySpec PolicySpec::geom_seq_nth_root(std::uint64_t degree) {
  if (degree < 1 || degree > kMaxRootDegree) {
    throw std::invalid_argument("gsnr: degree must be in [1, 64]");
  }
  return {PolicyAlgo::GeomSeqNthRoot, degree, false};
}

PolicySpec PolicySpec::curbed_recency_proportional(std::uint64_t size_cap) {
  if (size_cap < 8) throw std::invalid_argument("crpr: size cap must be >= 8");
  if (size_cap > kMaxCurbCap) {
    throw std::invalid_argument("crpr: size cap must be <= 1048576");
  }
  return {PolicyAlgo::CurbedRecencyProportional, size_cap, false};
}

std::string PolicySpec::to_string() const {
  const char* name = nullptr;
  switch (algo_) {
    case PolicyAlgo::FixedResolution: name = "fixed"; break;
    case PolicyAlgo::DepthProportional: name = tapered_ ? "dpr-tapered" : "dpr"; break;
    case PolicyAlgo::RecencyProportional: name = "rpr"; break;
    case PolicyAlgo::GeomSeqNthRoot: name = "gsnr"; break;
    case PolicyAlgo::CurbedRecencyProportional: name = "crpr"; break;
  }
  return std::string(name) + ":" + std::to_string(param_);
}

PolicySpec PolicySpec::parse(std::string_view text) {
  auto pos = text.find(':');
  if (pos == std::string_view::npos) {
    throw std::invalid_argument("policy must look like algo:param, got '" +
                                std::string(text) + "'");
  }
  std::string_view name = text.substr(0, pos);
  std::string_view num = text.substr(pos + 1);
  std::uint64_t param = 0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), param);
  if (ec != std::errc{} || ptr != num.data() + num.size()) {
    throw std::invalid_argument("policy parameter must be a non-negative integer, got '" +
                                std::string(num) + "'");
  }
  if (name == "fixed") return fixed_resolution(param);
  if (name == "dpr") return depth_proportional(param, false);
  if (name == "dpr-tapered") return depth_proportional(param, true);
  if (name == "rpr") return recency_proportional(param);
  if (name == "gsnr") return geom_seq_nth_root(param);
  if (name == "crpr") return curbed_recency_proportional(param);
  throw std::invalid_argument("unknown policy algorithm '" + std::string(name) + "'");
}

std::uint64_t crpr_switch_depth(std::uint64_t size_cap) {
  std::uint64_t k = size_cap / 3;
  if (k >= 64) return std::numeric_limits<std::uint64_t>::max();
  return (1ull << k) / 2;
}

ActivePolicy crpr_active(std::uint64_t size_cap, TimePoint depth) {
  if (size_cap < 8) throw std::invalid_argument("crpr: size cap must be >= 8");
  if (depth < crpr_switch_depth(size_cap)) {
    unsigned level = ceil_log2_succ(depth);
    std::uint64_t q = size_cap / (level + 1u);
    return {PolicyAlgo::RecencyProportional, q >= 2 ? q - 1 : 1};
  }
  return {PolicyAlgo::GeomSeqNthRoot,
          std::max<std::uint64_t>((size_cap - 2) / 6, 1)};
}

std::vector<TimePoint> enumerate_target(const PolicySpec& policy, TimePoint depth) {
  std::vector<TimePoint> out;
  switch (policy.algo()) {
    case PolicyAlgo::FixedResolution:
      append_multiples(policy.param(), depth, out);
      break;
    case PolicyAlgo::DepthProportional:
      append_depth_proportional(policy.param(), depth, out);
      break;
    case PolicyAlgo::RecencyProportional:
      append_recency_proportional(policy.param(), depth, out);
      break;
    case PolicyAlgo::GeomSeqNthRoot:
      append_geom_seq_nth_root(policy.param(), depth, out);
      break;
    case PolicyAlgo::CurbedRecencyProportional: {
      ActivePolicy active = crpr_active(policy.param(), depth);
      if (active.algo == PolicyAlgo::RecencyProportional) {
        append_recency_proportional(active.param, depth, out);
      } else {
        append_geom_seq_nth_root(active.param, depth, out);
      }
      break;
    }
  }
  return out;
}

std::vector<TimePoint> enumerate_retained(const PolicySpec& policy, TimePoint depth) {
  if (history_free(policy)) return enumerate_target(policy, depth);
  return RetentionSchedule::at_depth(policy, depth).times();
}

std::vector<TimePoint> drops_at(const PolicySpec& policy, TimePoint depth) {
  assert(depth >= 1 && "drops_at requires depth >= 1");
  std::vector<TimePoint> prev, cur;
  if (history_free(policy)) {
    prev = enumerate_target(policy, depth - 1);
    cur = enumerate_target(policy, depth);
  } else {
    RetentionSchedule schedule = RetentionSchedule::at_depth(policy, depth - 1);
    prev = schedule.times();
    schedule.advance();
    cur = schedule.times();
  }
  prev.push_back(depth);  // prev entries are all < depth
  std::vector<TimePoint> out;
  std::set_difference(prev.begin(), prev.end(), cur.begin(), cur.end(),
                      std::back_inserter(out));
  return out;
}

std::uint64_t gap_bound(const PolicySpec& policy, TimePoint depth, TimePoint t) {
  assert(t <= depth);
  auto recency_form = [&](std::uint64_t r) {
    return std::max<std::uint64_t>(1, (depth - t) / r);
  };
  auto geometric_form = [&](std::uint64_t a) -> std::uint64_t {
    long double rho = std::pow(static_cast<long double>(depth),
                               1.0L / static_cast<long double>(a));
    long double raw =
        std::ceil(2.0L * static_cast<long double>(depth - t) * (rho - 1.0L)) + 2.0L;
    if (raw < 1.0L) return 1;
    if (raw >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(raw);
  };
  switch (policy.algo()) {
    case PolicyAlgo::FixedResolution:
      return policy.param();
    case PolicyAlgo::DepthProportional:
      return std::max<std::uint64_t>(1, depth / policy.param());
    case PolicyAlgo::RecencyProportional:
      return recency_form(policy.param());
    case PolicyAlgo::GeomSeqNthRoot:
      return geometric_form(policy.param());
    case PolicyAlgo::CurbedRecencyProportional: {
      ActivePolicy active = crpr_active(policy.param(), depth);
      return active.algo == PolicyAlgo::RecencyProportional
                 ? recency_form(active.param)
                 : geometric_form(active.param);
    }
  }
  return 1;  // unreachable
}

std::uint64_t size_bound(const PolicySpec& policy, TimePoint depth) {
  switch (policy.algo()) {
    case PolicyAlgo::FixedResolution:
      return depth / policy.param() + 2;
    case PolicyAlgo::DepthProportional:
      return sat_mul_add(2, policy.param(), 2);
    case PolicyAlgo::RecencyProportional: {
      std::uint64_t levels = floor_log2(std::max<TimePoint>(depth, 1)) + 1u;
      return sat_mul_add(policy.param(), levels, levels + 1);
    }
    case PolicyAlgo::GeomSeqNthRoot:
      return sat_mul_add(6, policy.param(), 4);
    case PolicyAlgo::CurbedRecencyProportional:
      return policy.param();
  }
  return 0;  // unreachable
}

}  // namespace strata
