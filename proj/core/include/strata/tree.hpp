#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace strata {

struct PhyloNode {
  double origin_time = 0.0;
  int parent = -1;
  std::vector<int> children;
  std::string label;  // nonempty marks a taxon tip
};

// Rooted tree with per-node origin times (absolute, nondecreasing root to
// leaf). Edge lengths are origin-time deltas.
class PhyloTree {
 public:
  PhyloTree() = default;

  int add_root(double origin_time);
  int add_child(int parent, double origin_time, std::string label = "");

  bool empty() const { return nodes_.empty(); }
  int root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  const PhyloNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  PhyloNode& node(int i) { return nodes_[static_cast<std::size_t>(i)]; }

  std::vector<int> labeled_tips() const;
  // Root-to-node path, inclusive.
  std::vector<int> path_from_root(int i) const;

  // Remove unlabeled pass-through nodes, splicing their single child onto the
  // parent; a pass-through root is replaced by its child. Compacts storage.
  void collapse_unifurcations();

 private:
  std::vector<PhyloNode> nodes_;
  int root_ = -1;
};

// Order-insensitive fingerprint of shape, origin times, and tip labels.
// Two trees are isomorphic-with-times iff their canonical forms match.
std::string canonical_form(const PhyloTree& tree);

// Shape/time/label equality up to child order.
bool trees_equivalent(const PhyloTree& a, const PhyloTree& b);

}  // namespace strata
