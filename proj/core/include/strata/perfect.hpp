#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "strata/policy.hpp"
#include "strata/tree.hpp"

namespace strata {

enum class TrackingMode { Naive, Pruning };

struct TaxonRecord {
  std::optional<std::uint64_t> parent;
  std::uint64_t living_offspring_lineages = 0;
  bool alive = true;
  TimePoint birth_time = 0;
};

// Centralized exact ancestry recorder. Naive mode keeps every record ever
// created; pruning mode reference-counts living offspring lineages and erases
// extinct branches as the last living descendant disappears. Single-writer
// value.
class PerfectTracker {
 public:
  explicit PerfectTracker(TrackingMode mode) : mode_(mode) {}

  TrackingMode mode() const { return mode_; }

  // Register a replication (or founding, when parent is absent). Throws on a
  // duplicate id or an unknown/pruned parent.
  void on_birth(std::uint64_t id, std::optional<std::uint64_t> parent,
                TimePoint birth_time);

  // Register a death. In pruning mode, erases the newly extinct chain by
  // ascending while the current record is dead with no living offspring
  // lineages; dead roots with no living lineages are erased as the ascent
  // reaches them. Throws if id is unknown or already dead.
  void on_removal(std::uint64_t id);

  bool contains(std::uint64_t id) const { return records_.count(id) != 0; }
  const TaxonRecord& record(std::uint64_t id) const;
  std::size_t record_count() const { return records_.size(); }
  std::vector<std::uint64_t> ids() const;

  // Unit-operation accounting: one unit per record insertion, liveness flip,
  // record erasure, and counter change. removal_unit_ops covers only units
  // spent inside on_removal.
  std::uint64_t total_unit_ops() const { return total_ops_; }
  std::uint64_t removal_unit_ops() const { return removal_ops_; }

  // Current forest as a tree over birth times; a synthetic root at time 0 is
  // materialized only when the forest has several roots. Living taxa that
  // still have recorded descendants appear as zero-length labeled tips.
  PhyloTree extant_tree() const;

  // Optional compaction: erase dead root-chain records that carry a single
  // living lineage (the stem left behind once the population coalesces).
  // The stem's end becomes a root. Returns the number of records erased.
  std::size_t prune_dead_stems();

 private:
  TrackingMode mode_;
  std::unordered_map<std::uint64_t, TaxonRecord> records_;
  std::set<std::uint64_t> roots_;
  std::uint64_t total_ops_ = 0;
  std::uint64_t removal_ops_ = 0;
};

}  // namespace strata
