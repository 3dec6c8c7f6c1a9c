#include "strata/schedule.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

namespace strata {
namespace {

enum class UpdateRule { Direct, Tapered, Snapped };

UpdateRule update_rule(const PolicySpec& policy) {
  switch (policy.algo()) {
    case PolicyAlgo::FixedResolution:
    case PolicyAlgo::RecencyProportional:
      return UpdateRule::Direct;
    case PolicyAlgo::DepthProportional:
      return policy.tapered() ? UpdateRule::Tapered : UpdateRule::Direct;
    case PolicyAlgo::GeomSeqNthRoot:
    case PolicyAlgo::CurbedRecencyProportional:
      return UpdateRule::Snapped;
  }
  return UpdateRule::Direct;
}

// For each target point, the largest available point not newer than it.
std::vector<TimePoint> snap_down(const std::vector<TimePoint>& target,
                                 const std::vector<TimePoint>& avail) {
  std::vector<TimePoint> out;
  out.reserve(target.size());
  std::size_t ai = 0;
  for (TimePoint t : target) {
    while (ai + 1 < avail.size() && avail[ai + 1] <= t) ++ai;
    TimePoint snapped = avail[ai];  // avail[0] == 0 <= t always
    if (out.empty() || out.back() != snapped) out.push_back(snapped);
  }
  return out;
}

}  // namespace

RetentionSchedule::RetentionSchedule(PolicySpec policy) : policy_(std::move(policy)) {}

RetentionSchedule RetentionSchedule::at_depth(PolicySpec policy, TimePoint depth) {
  RetentionSchedule schedule(policy);
  if (update_rule(schedule.policy_) == UpdateRule::Direct) {
    schedule.depth_ = depth;
    schedule.times_ = enumerate_target(schedule.policy_, depth);
    return schedule;
  }
  for (TimePoint i = 0; i <= depth; ++i) schedule.advance();
  return schedule;
}

TimePoint RetentionSchedule::depth() const {
  if (!depth_) throw std::logic_error("schedule has no observations yet");
  return *depth_;
}

std::vector<std::size_t> RetentionSchedule::advance() {
  if (!depth_) {
    depth_ = 0;
    times_ = {0};
    return {};
  }
  const TimePoint n = *depth_ + 1;
  std::vector<TimePoint> next;

  switch (update_rule(policy_)) {
    case UpdateRule::Direct: {
      next = enumerate_target(policy_, n);
      break;
    }
    case UpdateRule::Tapered: {
      // Phase out at most one stale point per deposit, oldest first. A point
      // never re-enters the target once its lattice coarsens past it, so any
      // point outside the current target is fair game.
      const std::vector<TimePoint> target = enumerate_target(policy_, n);
      std::optional<TimePoint> victim;
      std::size_t ti = 0;
      for (TimePoint have : times_) {
        while (ti < target.size() && target[ti] < have) ++ti;
        if (ti == target.size() || target[ti] != have) {
          victim = have;
          break;
        }
      }
      next.reserve(times_.size() + 1);
      for (TimePoint have : times_) {
        if (victim && have == *victim) continue;
        next.push_back(have);
      }
      next.push_back(n);
      break;
    }
    case UpdateRule::Snapped: {
      const std::vector<TimePoint> target = enumerate_target(policy_, n);
      std::vector<TimePoint> avail = times_;
      avail.push_back(n);
      next = snap_down(target, avail);
      if (next != target) ++snap_events_;
      break;
    }
  }

  assert(!next.empty() && next.front() == 0 && next.back() == n);
#ifndef NDEBUG
  // Self-consistency: every kept point was already retained or is the newest.
  {
    std::size_t oi = 0;
    for (TimePoint kept : next) {
      if (kept == n) continue;
      while (oi < times_.size() && times_[oi] < kept) ++oi;
      assert(oi < times_.size() && times_[oi] == kept);
    }
  }
#endif

  std::vector<std::size_t> dropped;
  std::size_t ni = 0;
  for (std::size_t oi = 0; oi < times_.size(); ++oi) {
    while (ni < next.size() && next[ni] < times_[oi]) ++ni;
    if (ni == next.size() || next[ni] != times_[oi]) dropped.push_back(oi);
  }

  times_ = std::move(next);
  depth_ = n;
  return dropped;
}

}  // namespace strata
