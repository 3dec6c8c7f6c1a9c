#include "strata/column.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace strata {
namespace {

std::uint64_t width_mask(unsigned width_bits) {
  return width_bits >= 64 ? ~0ull : (1ull << width_bits) - 1;
}

void require_width(unsigned width_bits) {
  if (!is_valid_differentia_width(width_bits)) {
    throw std::invalid_argument("differentia width must be one of 1, 8, 16, 32, 64");
  }
}

}  // namespace

bool is_valid_differentia_width(unsigned width_bits) {
  switch (width_bits) {
    case 1:
    case 8:
    case 16:
    case 32:
    case 64:
      return true;
    default:
      return false;
  }
}

StratColumn::StratColumn(PolicySpec policy, unsigned width_bits, SplitMix64 rng)
    : schedule_(std::move(policy)), rng_(rng), width_bits_(width_bits) {
  require_width(width_bits);
}

StratColumn::StratColumn(PolicySpec policy, unsigned width_bits, std::uint64_t seed)
    : StratColumn(std::move(policy), width_bits, SplitMix64(seed)) {
  deposit();
}

StratColumn StratColumn::make_empty(PolicySpec policy, unsigned width_bits,
                                    std::uint64_t seed) {
  return StratColumn(std::move(policy), width_bits, SplitMix64(seed));
}

StratColumn StratColumn::from_parts(PolicySpec policy, unsigned width_bits,
                                    TimePoint depth,
                                    std::vector<std::uint64_t> differentia,
                                    std::uint64_t reseed) {
  StratColumn column(policy, width_bits, SplitMix64(reseed));
  column.schedule_ = RetentionSchedule::at_depth(std::move(policy), depth);
  if (differentia.size() != column.schedule_.size()) {
    throw std::runtime_error("differentia count does not match the retained set at this depth");
  }
  const std::uint64_t mask = width_mask(width_bits);
  for (std::uint64_t d : differentia) {
    if ((d & ~mask) != 0) {
      throw std::runtime_error("differentia value exceeds the declared bit width");
    }
  }
  column.differentia_ = std::move(differentia);
  return column;
}

void StratColumn::deposit() {
  auto dropped = schedule_.advance();
  for (auto it = dropped.rbegin(); it != dropped.rend(); ++it) {
    differentia_.erase(differentia_.begin() + static_cast<std::ptrdiff_t>(*it));
  }
  differentia_.push_back(rng_.next() & width_mask(width_bits_));
}

StratColumn StratColumn::inherit() {
  StratColumn child = *this;
  child.rng_ = rng_.fork();
  child.deposit();
  return child;
}

std::optional<MrcaBounds> mrca_bounds(const StratColumn& a, const StratColumn& b) {
  if (a.policy() != b.policy()) {
    throw std::invalid_argument("mrca_bounds requires matching retention policies");
  }
  if (a.width_bits() != b.width_bits()) {
    throw std::invalid_argument("mrca_bounds requires matching differentia widths");
  }
  if (a.empty() || b.empty()) return std::nullopt;

  const TimePoint truncated_depth = std::min(a.depth(), b.depth());
  const auto& ta = a.retained_times();
  const auto& tb = b.retained_times();

  // Walk the intersection of retained times up to the shallower depth. The
  // initial run of matching fingerprints brackets the divergence.
  std::size_t ia = 0, ib = 0;
  std::uint64_t run = 0;
  TimePoint last_match = 0;
  std::optional<TimePoint> first_miss;
  while (ia < ta.size() && ib < tb.size() && ta[ia] <= truncated_depth &&
         tb[ib] <= truncated_depth) {
    if (ta[ia] < tb[ib]) {
      ++ia;
    } else if (tb[ib] < ta[ia]) {
      ++ib;
    } else {
      if (a.differentia()[ia] == b.differentia()[ib]) {
        ++run;
        last_match = ta[ia];
      } else {
        first_miss = ta[ia];
        break;
      }
      ++ia;
      ++ib;
    }
  }

  if (run == 0) return std::nullopt;

  const long double mismatch_odds =
      std::exp2(-static_cast<long double>(a.width_bits()) * static_cast<long double>(run));
  MrcaBounds bounds;
  bounds.lower = last_match;
  bounds.upper = first_miss ? *first_miss - 1 : truncated_depth;
  bounds.collision_confidence = static_cast<double>(1.0L - mismatch_odds);
  return bounds;
}

double expected_spurious_matches(unsigned width_bits) {
  if (width_bits < 1) throw std::invalid_argument("fingerprint width must be >= 1");
  const long double denom = std::exp2(static_cast<long double>(width_bits)) - 1.0L;
  return static_cast<double>(1.0L / denom);
}

}  // namespace strata
