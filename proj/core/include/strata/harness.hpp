#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strata/column.hpp"
#include "strata/perfect.hpp"
#include "strata/policy.hpp"
#include "strata/reconstruct.hpp"
#include "strata/tree.hpp"

namespace strata {

enum class SimModel { Moran, WrightFisher };

// Neutral-drift simulation: parents drawn uniformly at random, no selection.
// Wright-Fisher replaces the whole population each generation; Moran performs
// population-size birth-death events per generation, with every live column
// depositing once per event so record depths stay synchronized (final depth
// is generations * population_size).
struct SimConfig {
  std::uint32_t population_size;
  std::uint32_t generations;
  SimModel model;
  PolicySpec policy;
  unsigned width_bits;
  std::uint64_t seed;
};

struct SimEvent {
  enum class Kind { Birth, Remove };
  Kind kind;
  std::uint64_t id;
  std::optional<std::uint64_t> parent;  // births only
};

struct SimResult {
  std::vector<SimEvent> events;
  std::vector<PopulationMember> population;  // final live columns, id-sorted
  PhyloTree truth;                           // pruned exact ancestry, uncollapsed
  std::uint64_t tracker_peak_records = 0;
  std::uint64_t tracker_final_records = 0;
  std::uint64_t removal_unit_ops = 0;
  std::uint64_t births = 0;
  std::uint64_t removals = 0;
};

// Deterministic under (config, seed): two runs produce bit-identical events,
// columns, and trees.
SimResult run_sim(const SimConfig& config);

struct ComparisonReport {
  double containment_rate = 0.0;     // fraction of tip pairs whose true
                                     // divergence lies inside the window
  double mean_window_width = 0.0;    // average upper - lower over windowed pairs
  double max_normalized_error = 0.0; // max window width / max(1, true recency)
  std::uint64_t pair_count = 0;
  std::uint64_t windowed_pair_count = 0;
  TrieStats trie_stats;
};

// Scores reconstruction windows against exact ancestry. `truth` must be the
// uncollapsed tracker export; tip labels must cover every column id.
ComparisonReport evaluate(const PhyloTree& truth,
                          std::span<const PopulationMember> population);

// True divergence generation of two tips in an uncollapsed exact tree:
// the last generation the two lineages shared. nullopt when the lineages
// never shared an ancestor.
std::optional<TimePoint> true_divergence(const PhyloTree& truth, int tip_a, int tip_b);

}  // namespace strata
