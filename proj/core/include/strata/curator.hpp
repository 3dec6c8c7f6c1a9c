#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "strata/policy.hpp"
#include "strata/schedule.hpp"

namespace strata {

// Rolling curated buffer over an unbounded observation stream. Each ingested
// payload is stamped with the deposit counter; the policy engine decides
// which stamped payloads survive. Single-writer value: mutate from one
// context at a time, share read-only snapshots freely.
template <typename Payload>
class StreamCurator {
 public:
  struct Observation {
    TimePoint time;
    const Payload& payload;
  };

  explicit StreamCurator(PolicySpec policy) : schedule_(std::move(policy)) {}

  const PolicySpec& policy() const { return schedule_.policy(); }
  bool empty() const { return !schedule_.has_observations(); }
  TimePoint depth() const { return schedule_.depth(); }
  std::size_t size() const { return payloads_.size(); }

  void ingest(Payload payload) {
    auto dropped = schedule_.advance();
    for (auto it = dropped.rbegin(); it != dropped.rend(); ++it) {
      payloads_.erase(payloads_.begin() + static_cast<std::ptrdiff_t>(*it));
    }
    payloads_.push_back(std::move(payload));
  }

  Observation observation(std::size_t i) const {
    if (i >= payloads_.size()) throw std::out_of_range("curator index out of range");
    return {schedule_.times()[i], payloads_[i]};
  }

  const std::vector<TimePoint>& times() const { return schedule_.times(); }
  const std::vector<Payload>& payloads() const { return payloads_; }

  // Retained time for buffer slot i, recomputed from (policy, depth) alone
  // rather than read from stored state. Always equals observation(i).time.
  TimePoint time_of_index(std::size_t i) const {
    if (empty() || i >= payloads_.size()) {
      throw std::out_of_range("curator index out of range");
    }
    return enumerate_retained(policy(), depth())[i];
  }

 private:
  RetentionSchedule schedule_;
  std::vector<Payload> payloads_;
};

}  // namespace strata
