#include "strata/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace strata {
namespace {

using Stratum = std::pair<TimePoint, std::uint64_t>;

// Scores how much consecutive evidence supports descending from `node` when
// the next stratum to place is strata[k]. A hop across another pruned time
// point ends the streak; so does a mismatch or a missing time point.
class StreakScorer {
 public:
  StreakScorer(const ReconstructionTrie& trie, const std::vector<Stratum>& strata,
               TrieStats* stats)
      : trie_(trie), strata_(strata), stats_(stats) {}

  std::uint64_t score(int node, std::size_t k) {
    if (k == strata_.size()) return 0;
    const std::uint64_t key =
        (static_cast<std::uint64_t>(node) << 32) | static_cast<std::uint64_t>(k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto [t, d] = strata_[k];
    std::uint64_t best = 0;
    for (int c : trie_.node(node).children) {
      const auto& child = trie_.node(c);
      if (child.time == t && child.differentia == d) {
        best = std::max(best, 1 + score(c, k + 1));
      }
    }
    memo_.emplace(key, best);
    return best;
  }

  void note_candidate() {
    ++paths_;
    if (stats_) ++stats_->paths_explored;
  }

  std::uint64_t paths() const { return paths_; }

 private:
  const ReconstructionTrie& trie_;
  const std::vector<Stratum>& strata_;
  TrieStats* stats_;
  std::unordered_map<std::uint64_t, std::uint64_t> memo_;
  std::uint64_t paths_ = 0;
};

std::vector<Stratum> strata_of(const StratColumn& column) {
  const auto& times = column.retained_times();
  const auto& diffs = column.differentia();
  std::vector<Stratum> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out.emplace_back(times[i], diffs[i]);
  return out;
}

}  // namespace

ReconstructionTrie build_trie(std::span<const PopulationMember> population,
                              TrieStats* stats) {
  ReconstructionTrie trie;
  if (population.empty()) return trie;

  const PolicySpec& policy = population.front().column.policy();
  const unsigned width = population.front().column.width_bits();
  for (const auto& member : population) {
    if (member.column.empty()) {
      throw std::invalid_argument("cannot reconstruct from a column with no strata");
    }
    if (!(member.column.policy() == policy) || member.column.width_bits() != width) {
      throw std::invalid_argument("population mixes retention policies or widths");
    }
  }

  // Shallowest records first; identical depths by id.
  std::vector<std::size_t> order(population.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    TimePoint dx = population[x].column.depth();
    TimePoint dy = population[y].column.depth();
    if (dx != dy) return dx < dy;
    return population[x].id < population[y].id;
  });

  for (std::size_t idx : order) {
    const auto& member = population[idx];
    const std::vector<Stratum> strata = strata_of(member.column);
    StreakScorer scorer(trie, strata, stats);

    int v = trie.root();
    std::size_t i = 0;
    while (i < strata.size()) {
      const auto [t, d] = strata[i];

      int direct = -1;
      bool saw_time_mismatch = false;
      std::vector<int> hops;
      for (int c : trie.node(v).children) {
        const auto& child = trie.node(c);
        if (child.time == t) {
          if (child.differentia == d) direct = c;
          else saw_time_mismatch = true;
        } else if (child.time < t) {
          hops.push_back(c);  // a time point this record pruned
        }
      }
      (void)saw_time_mismatch;
      const bool wildcard_site = !hops.empty();
      if (wildcard_site && stats) ++stats->wildcard_sites;

      // Score candidates: following the exact match consumes the stratum;
      // hopping across a pruned time point does not. Only wildcard sites
      // count toward path-exploration instrumentation.
      std::uint64_t best_score = 0;
      int best = -1;
      bool best_is_direct = false;
      auto consider = [&](int cand, bool is_direct, std::uint64_t sc) {
        if (wildcard_site) scorer.note_candidate();
        if (sc == 0) return;
        const auto& cn = trie.node(cand);
        bool better = sc > best_score;
        if (sc == best_score && best != -1) {
          const auto& bn = trie.node(best);
          better = std::pair(cn.differentia, cn.time) < std::pair(bn.differentia, bn.time);
        }
        if (best == -1 || better) {
          best_score = sc;
          best = cand;
          best_is_direct = is_direct;
        }
      };
      if (direct != -1) consider(direct, true, 1 + scorer.score(direct, i + 1));
      for (int h : hops) consider(h, false, scorer.score(h, i));

      if (best == -1) {
        // No evidence anywhere: the lineage forks here.
        for (; i < strata.size(); ++i) {
          int child = static_cast<int>(trie.size());
          trie.nodes_.push_back(
              ReconstructionTrie::Node{strata[i].first, strata[i].second, v, {}, {}});
          trie.mut(v).children.push_back(child);
          v = child;
        }
        break;
      }
      v = best;
      if (best_is_direct) ++i;
    }

    trie.mut(v).members.push_back(member.id);
    if (stats) {
      stats->max_paths_single_insert =
          std::max(stats->max_paths_single_insert, scorer.paths());
    }
  }
  return trie;
}

PhyloTree trie_to_tree(const ReconstructionTrie& trie, PolytomyMode mode) {
  PhyloTree tree;
  int root = tree.add_root(0.0);

  struct Frame {
    int trie_node;
    int tree_parent;
  };
  std::vector<Frame> stack;

  auto emit_children = [&](int trie_node, int tree_parent) {
    // Deterministic order: (time, differentia) for branches, then member ids.
    std::vector<int> kids = trie.node(trie_node).children;
    std::sort(kids.begin(), kids.end(), [&](int x, int y) {
      const auto& nx = trie.node(x);
      const auto& ny = trie.node(y);
      return std::pair(nx.time, nx.differentia) < std::pair(ny.time, ny.differentia);
    });
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      stack.push_back({*it, tree_parent});
    }
  };

  emit_children(trie.root(), root);
  // The sentinel root never carries members (every column has a stratum).

  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const auto& tn = trie.node(f.trie_node);
    int tree_node = tree.add_child(f.tree_parent, static_cast<double>(tn.time));

    std::vector<std::string> members = tn.members;
    std::sort(members.begin(), members.end());
    if (tn.children.empty() && members.size() == 1) {
      tree.node(tree_node).label = members.front();
    } else {
      for (const auto& id : members) {
        tree.add_child(tree_node, static_cast<double>(tn.time), id);
      }
    }
    emit_children(f.trie_node, tree_node);
  }

  if (mode == PolytomyMode::Bifurcate) {
    // Left-deep cascades of zero-length internal edges. Children are already
    // in deterministic order.
    PhyloTree split;
    struct SFrame {
      int src;
      int dst_parent;
    };
    std::vector<SFrame> sstack;
    const PhyloNode& r = tree.node(tree.root());
    int sroot = split.add_root(r.origin_time);
    split.node(sroot).label = r.label;

    auto expand = [&](int src, int dst) {
      const auto& children = tree.node(src).children;
      if (children.size() <= 2) {
        for (auto it = children.rbegin(); it != children.rend(); ++it) {
          sstack.push_back({*it, dst});
        }
        return;
      }
      // ((c1,c2),c3),c4... : build the cascade top-down, attaching the last
      // child at each level and recursing into an inner zero-length node.
      int cur = dst;
      for (std::size_t k = children.size(); k > 2; --k) {
        sstack.push_back({children[k - 1], cur});
        cur = split.add_child(cur, tree.node(src).origin_time);
      }
      sstack.push_back({children[1], cur});
      sstack.push_back({children[0], cur});
    };

    expand(tree.root(), sroot);
    while (!sstack.empty()) {
      SFrame f = sstack.back();
      sstack.pop_back();
      const PhyloNode& src = tree.node(f.src);
      int dst = split.add_child(f.dst_parent, src.origin_time, src.label);
      expand(f.src, dst);
    }
    tree = std::move(split);
  }

  tree.collapse_unifurcations();
  return tree;
}

PhyloTree correct_origin_times(const PhyloTree& tree, unsigned width_bits) {
  if (tree.empty()) return tree;
  const double bias = expected_spurious_matches(width_bits);
  PhyloTree out = tree;

  // Root-first order so each node clamps against its already-shifted parent.
  std::vector<int> order;
  order.reserve(out.size());
  std::vector<int> stack{out.root()};
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    order.push_back(i);
    for (int c : out.node(i).children) stack.push_back(c);
  }

  for (int i : order) {
    const PhyloNode& original = tree.node(i);
    if (original.children.empty()) continue;  // tips stay put
    double gap_sum = 0.0;
    for (int c : original.children) {
      gap_sum += tree.node(c).origin_time - original.origin_time;
    }
    double local_gap = gap_sum / static_cast<double>(original.children.size());
    double shifted = original.origin_time - bias * local_gap;
    double floor_time =
        out.node(i).parent == -1 ? 0.0 : out.node(out.node(i).parent).origin_time;
    out.node(i).origin_time = std::max(shifted, floor_time);
    if (out.node(i).origin_time < 0.0) out.node(i).origin_time = 0.0;
  }
  return out;
}

std::vector<std::vector<std::optional<MrcaBounds>>> pairwise_mrca_matrix(
    std::span<const PopulationMember> population) {
  const std::size_t n = population.size();
  std::vector<std::vector<std::optional<MrcaBounds>>> matrix(
      n, std::vector<std::optional<MrcaBounds>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      auto bounds = mrca_bounds(population[i].column, population[j].column);
      matrix[i][j] = bounds;
      matrix[j][i] = bounds;
    }
  }
  return matrix;
}

}  // namespace strata
