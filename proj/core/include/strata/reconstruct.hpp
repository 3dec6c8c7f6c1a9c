#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strata/column.hpp"
#include "strata/tree.hpp"

namespace strata {

struct PopulationMember {
  std::string id;
  StratColumn column;
};

// Instrumentation for insertions that had to search across pruned-away time
// points.
struct TrieStats {
  std::uint64_t wildcard_sites = 0;        // decision points with pruned-time branches
  std::uint64_t paths_explored = 0;        // candidate branch evaluations, total
  std::uint64_t max_paths_single_insert = 0;
};

// Prefix tree over (time point, differentia) pairs. Shallower annotations are
// inserted first so later, deeper annotations never have to splice nodes
// between existing ones; where an inserted annotation has pruned a time point
// the trie still carries, candidate branches are scored by their streak of
// subsequent matching strata.
class ReconstructionTrie {
 public:
  struct Node {
    TimePoint time = 0;
    std::uint64_t differentia = 0;
    int parent = -1;
    std::vector<int> children;
    std::vector<std::string> members;  // column ids terminating here
  };

  ReconstructionTrie() { nodes_.push_back(Node{}); }  // sentinel root

  int root() const { return 0; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return nodes_.size(); }

  friend ReconstructionTrie build_trie(std::span<const PopulationMember>, TrieStats*);

 private:
  Node& mut(int i) { return nodes_[static_cast<std::size_t>(i)]; }
  std::vector<Node> nodes_;
};

// Agglomerates a shared-policy, shared-width population into a trie.
// Insertion order is ascending depth, ties by id. Throws
// std::invalid_argument on mixed policies/widths or empty columns.
ReconstructionTrie build_trie(std::span<const PopulationMember> population,
                              TrieStats* stats = nullptr);

enum class PolytomyMode { Keep, Bifurcate };

// Derives the reconstructed tree: unifurcating chains collapse into single
// edges; in Bifurcate mode every k>2 furcation becomes a left-deep cascade of
// zero-length bifurcations (children ordered by time then differentia).
PhyloTree trie_to_tree(const ReconstructionTrie& trie, PolytomyMode mode);

// Shifts internal origin times earlier by the expected spurious-match count
// times the local mean gap width, clamped at the parent's (shifted) time and
// at zero. Tips are untouched.
PhyloTree correct_origin_times(const PhyloTree& tree, unsigned width_bits);

// Symmetric matrix of divergence windows; diagonal entries compare a column
// with itself. nullopt marks pairs with no evidence of common ancestry.
std::vector<std::vector<std::optional<MrcaBounds>>> pairwise_mrca_matrix(
    std::span<const PopulationMember> population);

}  // namespace strata
