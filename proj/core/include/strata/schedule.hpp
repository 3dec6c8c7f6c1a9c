#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "strata/policy.hpp"

namespace strata {

// Incremental engine maintaining the retained time points of one record as
// observations accrue. A schedule is a plain value holding O(size_bound)
// state; advancing costs O(retained count) per deposit.
class RetentionSchedule {
 public:
  explicit RetentionSchedule(PolicySpec policy);

  // Schedule state after depth+1 deposits. History-free policies construct
  // directly; tapered and snap-filtered policies replay from depth 0.
  static RetentionSchedule at_depth(PolicySpec policy, TimePoint depth);

  const PolicySpec& policy() const { return policy_; }
  bool has_observations() const { return depth_.has_value(); }
  TimePoint depth() const;  // requires has_observations()
  const std::vector<TimePoint>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }

  // Ingest one observation. Returns the indices into the pre-advance times()
  // that the deposit evicts, ascending. The first advance establishes depth 0
  // with retained set {0} and evicts nothing. The newest time point is always
  // appended after the evictions.
  std::vector<std::size_t> advance();

  // Number of advances in which self-consistency snapping rewrote the raw
  // target enumeration (geometric-band and curbed policies only).
  std::uint64_t snap_events() const { return snap_events_; }

 private:
  PolicySpec policy_;
  std::optional<TimePoint> depth_;
  std::vector<TimePoint> times_;
  std::uint64_t snap_events_ = 0;
};

}  // namespace strata
