#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "strata/int_math.hpp"

namespace strata {

// Observation / generation index, 0-based. Depth n means n+1 observations
// have been ingested (times 0..n).
using TimePoint = std::uint64_t;

enum class PolicyAlgo {
  FixedResolution,
  DepthProportional,
  RecencyProportional,
  GeomSeqNthRoot,
  CurbedRecencyProportional,
};

// Tagged selection of one retention algorithm plus its integer parameter.
// Construction validates parameters; instances are immutable values.
class PolicySpec {
 public:
  static PolicySpec fixed_resolution(std::uint64_t resolution);
  static PolicySpec depth_proportional(std::uint64_t resolution, bool tapered = false);
  static PolicySpec recency_proportional(std::uint64_t resolution);
  static PolicySpec geom_seq_nth_root(std::uint64_t degree);
  static PolicySpec curbed_recency_proportional(std::uint64_t size_cap);

  PolicyAlgo algo() const { return algo_; }
  std::uint64_t param() const { return param_; }
  bool tapered() const { return tapered_; }

  // Flag grammar shared by files and the CLI:
  //   fixed | dpr | dpr-tapered | rpr | gsnr | crpr, colon, parameter.
  std::string to_string() const;
  static PolicySpec parse(std::string_view text);

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;

 private:
  PolicySpec(PolicyAlgo algo, std::uint64_t param, bool tapered)
      : algo_(algo), param_(param), tapered_(tapered) {}

  PolicyAlgo algo_;
  std::uint64_t param_;
  bool tapered_;
};

// Sub-policy a curbed recency-proportional record delegates to at one depth.
struct ActivePolicy {
  PolicyAlgo algo;
  std::uint64_t param;
  friend bool operator==(const ActivePolicy&, const ActivePolicy&) = default;
};

// Depth at which a curbed record of cap m hands over from the
// recency-proportional phase to the geometric-sequence tail. Saturates to
// UINT64_MAX when the handover lies beyond representable depths.
std::uint64_t crpr_switch_depth(std::uint64_t size_cap);

// Which algorithm drives a curbed record of cap m at depth n.
ActivePolicy crpr_active(std::uint64_t size_cap, TimePoint depth);

// Raw target enumeration at depth n, before any self-consistency filtering.
// Sorted ascending, always contains 0 and n.
std::vector<TimePoint> enumerate_target(const PolicySpec& policy, TimePoint depth);

// Time points actually retained at depth n. Equals enumerate_target for the
// fixed, depth-proportional, and recency-proportional algorithms; the tapered
// and snap-filtered algorithms replay the deposit history (O(n) worst case).
std::vector<TimePoint> enumerate_retained(const PolicySpec& policy, TimePoint depth);

// Time points evicted by the deposit that brings the record to depth n:
// (retained(n-1) ∪ {n}) \ retained(n). Requires n >= 1.
std::vector<TimePoint> drops_at(const PolicySpec& policy, TimePoint depth);

// Guaranteed ceiling on the width of the retained-set gap that begins at
// retained point t, for a record at depth n. Requires t <= n.
std::uint64_t gap_bound(const PolicySpec& policy, TimePoint depth, TimePoint t);

// Guaranteed ceiling on the retained count at depth n.
std::uint64_t size_bound(const PolicySpec& policy, TimePoint depth);

}  // namespace strata
