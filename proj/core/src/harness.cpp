#include "strata/harness.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "strata/rng.hpp"

namespace strata {
namespace {

void require_config(const SimConfig& config) {
  if (config.population_size < 2) {
    throw std::invalid_argument("population size must be >= 2");
  }
  if (config.generations < 1) {
    throw std::invalid_argument("generation count must be >= 1");
  }
  if (!is_valid_differentia_width(config.width_bits)) {
    throw std::invalid_argument("differentia width must be one of 1, 8, 16, 32, 64");
  }
}

}  // namespace

SimResult run_sim(const SimConfig& config) {
  require_config(config);
  SplitMix64 rng(config.seed);
  PerfectTracker tracker(TrackingMode::Pruning);
  SimResult result;

  const std::uint64_t n = config.population_size;
  std::vector<std::uint64_t> live_ids(n);
  std::vector<StratColumn> columns;
  columns.reserve(n);
  std::uint64_t next_id = 0;

  auto note_birth = [&](std::uint64_t id, std::optional<std::uint64_t> parent,
                        TimePoint t) {
    tracker.on_birth(id, parent, t);
    result.events.push_back({SimEvent::Kind::Birth, id, parent});
    ++result.births;
    result.tracker_peak_records =
        std::max<std::uint64_t>(result.tracker_peak_records, tracker.record_count());
  };
  auto note_removal = [&](std::uint64_t id) {
    tracker.on_removal(id);
    result.events.push_back({SimEvent::Kind::Remove, id, std::nullopt});
    ++result.removals;
  };

  for (std::uint64_t i = 0; i < n; ++i) {
    live_ids[i] = next_id++;
    columns.emplace_back(config.policy, config.width_bits, rng.next());
    note_birth(live_ids[i], std::nullopt, 0);
  }

  if (config.model == SimModel::WrightFisher) {
    for (std::uint32_t gen = 1; gen <= config.generations; ++gen) {
      std::vector<std::uint64_t> child_ids(n);
      std::vector<StratColumn> child_columns;
      child_columns.reserve(n);
      for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t parent_slot = rng.below(n);
        child_ids[i] = next_id++;
        child_columns.push_back(columns[parent_slot].inherit());
        note_birth(child_ids[i], live_ids[parent_slot], gen);
      }
      for (std::uint64_t i = 0; i < n; ++i) note_removal(live_ids[i]);
      live_ids = std::move(child_ids);
      columns = std::move(child_columns);
    }
  } else {
    const std::uint64_t steps =
        static_cast<std::uint64_t>(config.generations) * n;
    for (std::uint64_t step = 1; step <= steps; ++step) {
      std::uint64_t parent_slot = rng.below(n);
      std::uint64_t victim_slot = rng.below(n);
      std::uint64_t child_id = next_id++;
      StratColumn child = columns[parent_slot].inherit();
      for (std::uint64_t i = 0; i < n; ++i) {
        if (i != victim_slot) columns[i].deposit();
      }
      // The child replaces the victim; its inherit() already deposited this
      // step, and the victim's column dies with it.
      note_birth(child_id, live_ids[parent_slot], step);
      note_removal(live_ids[victim_slot]);
      live_ids[victim_slot] = child_id;
      columns[victim_slot] = std::move(child);
    }
  }

  result.population.reserve(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return live_ids[a] < live_ids[b]; });
  for (std::size_t i : order) {
    result.population.push_back({std::to_string(live_ids[i]), columns[i]});
  }

  result.truth = tracker.extant_tree();
  result.tracker_final_records = tracker.record_count();
  result.removal_unit_ops = tracker.removal_unit_ops();
  return result;
}

std::optional<TimePoint> true_divergence(const PhyloTree& truth, int tip_a, int tip_b) {
  const std::vector<int> pa = truth.path_from_root(tip_a);
  const std::vector<int> pb = truth.path_from_root(tip_b);
  std::size_t common = 0;
  while (common < pa.size() && common < pb.size() && pa[common] == pb[common]) {
    ++common;
  }
  if (common == 0) return std::nullopt;

  auto branch_child_birth = [&](const std::vector<int>& path) -> std::optional<TimePoint> {
    if (common >= path.size()) return std::nullopt;  // one tip sits on the path
    int child = path[common];
    const PhyloNode& c = truth.node(child);
    const PhyloNode& lca = truth.node(path[common - 1]);
    // A zero-length labeled tip is the stand-in for a taxon that is also an
    // ancestor; the lineage itself continues, so it does not date the split.
    if (c.children.empty() && !c.label.empty() && c.origin_time == lca.origin_time) {
      return std::nullopt;
    }
    return static_cast<TimePoint>(c.origin_time);
  };

  std::optional<TimePoint> ba = branch_child_birth(pa);
  std::optional<TimePoint> bb = branch_child_birth(pb);
  std::optional<TimePoint> split;
  if (ba && bb) {
    split = std::min(*ba, *bb);
  } else if (ba) {
    split = ba;
  } else if (bb) {
    split = bb;
  } else {
    // Identical tips; divergence is their own time.
    return static_cast<TimePoint>(truth.node(tip_a).origin_time);
  }
  if (*split == 0) return std::nullopt;  // distinct founding lineages
  return *split - 1;                     // last shared generation
}

ComparisonReport evaluate(const PhyloTree& truth,
                          std::span<const PopulationMember> population) {
  ComparisonReport report;

  std::unordered_map<std::string, int> tip_of_label;
  for (int tip : truth.labeled_tips()) {
    tip_of_label.emplace(truth.node(tip).label, tip);
  }
  if (tip_of_label.size() != population.size()) {
    throw std::invalid_argument("exact tree tips and population ids disagree");
  }
  std::vector<int> tips(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    auto it = tip_of_label.find(population[i].id);
    if (it == tip_of_label.end()) {
      throw std::invalid_argument("column id missing from the exact tree: " +
                                  population[i].id);
    }
    tips[i] = it->second;
  }

  const auto matrix = pairwise_mrca_matrix(population);
  std::uint64_t contained = 0;
  double width_sum = 0.0;

  for (std::size_t i = 0; i < population.size(); ++i) {
    for (std::size_t j = i + 1; j < population.size(); ++j) {
      ++report.pair_count;
      const auto truth_gen = true_divergence(truth, tips[i], tips[j]);
      const auto& window = matrix[i][j];
      if (!window) {
        if (!truth_gen) ++contained;
        continue;
      }
      ++report.windowed_pair_count;
      const double width =
          static_cast<double>(window->upper) - static_cast<double>(window->lower);
      width_sum += width;
      if (truth_gen) {
        const TimePoint depth =
            std::min(population[i].column.depth(), population[j].column.depth());
        const double recency =
            std::max<double>(1.0, static_cast<double>(depth) - static_cast<double>(*truth_gen));
        report.max_normalized_error =
            std::max(report.max_normalized_error, width / recency);
        if (*truth_gen >= window->lower && *truth_gen <= window->upper) ++contained;
      }
    }
  }

  report.containment_rate =
      report.pair_count ? static_cast<double>(contained) /
                              static_cast<double>(report.pair_count)
                        : 1.0;
  report.mean_window_width =
      report.windowed_pair_count
          ? width_sum / static_cast<double>(report.windowed_pair_count)
          : 0.0;
  build_trie(population, &report.trie_stats);
  return report;
}

}  // namespace strata
