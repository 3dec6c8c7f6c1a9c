#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "strata/policy.hpp"
#include "strata/rng.hpp"
#include "strata/schedule.hpp"

namespace strata {

// Closed window of generations bracketing two lineages' divergence, plus the
// probability that the bracketing evidence is not a chance fingerprint
// collision.
struct MrcaBounds {
  TimePoint lower;  // inclusive
  TimePoint upper;  // inclusive
  double collision_confidence;
};

bool is_valid_differentia_width(unsigned width_bits);

// Heritable annotation: one w-bit randomly drawn fingerprint per retained
// time point, kept index-aligned with the retention schedule. Times are never
// stored per stratum; the schedule reproduces them.
class StratColumn {
 public:
  // Founder column carrying its first stratum at time 0.
  StratColumn(PolicySpec policy, unsigned width_bits, std::uint64_t seed);

  // Column that has never deposited. The first deposit establishes time 0.
  static StratColumn make_empty(PolicySpec policy, unsigned width_bits,
                                std::uint64_t seed);

  // Rehydrate from serialized fields. The fingerprint count must match the
  // policy's retained set at this depth. Deposits after rehydration draw from
  // a stream reseeded with `reseed`.
  static StratColumn from_parts(PolicySpec policy, unsigned width_bits,
                                TimePoint depth,
                                std::vector<std::uint64_t> differentia,
                                std::uint64_t reseed);

  const PolicySpec& policy() const { return schedule_.policy(); }
  unsigned width_bits() const { return width_bits_; }
  bool empty() const { return !schedule_.has_observations(); }
  TimePoint depth() const { return schedule_.depth(); }
  std::size_t strata_count() const { return differentia_.size(); }
  const std::vector<std::uint64_t>& differentia() const { return differentia_; }
  const std::vector<TimePoint>& retained_times() const { return schedule_.times(); }

  // Append a fresh fingerprint at the next time point and apply evictions.
  void deposit();

  // Deep copy with an independently forked random stream, then one deposit.
  // Advances this column's stream by one draw to derive the fork.
  StratColumn inherit();

 private:
  StratColumn(PolicySpec policy, unsigned width_bits, SplitMix64 rng);

  RetentionSchedule schedule_;
  std::vector<std::uint64_t> differentia_;
  SplitMix64 rng_;
  unsigned width_bits_;
};

// Divergence window between two same-policy, same-width annotations, after
// truncating the deeper one to the shallower depth. Returns nullopt when the
// earliest shared time point already mismatches (no evidence of common
// ancestry). Throws std::invalid_argument on policy or width mismatch.
std::optional<MrcaBounds> mrca_bounds(const StratColumn& a, const StratColumn& b);

// Expected count of consecutive trailing fingerprint matches between two
// unrelated annotations: sum over k>=1 of 2^(-w k) = 1 / (2^w - 1).
double expected_spurious_matches(unsigned width_bits);

}  // namespace strata
