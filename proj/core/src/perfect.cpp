#include "strata/perfect.hpp"

#include <algorithm>
#include <stdexcept>

namespace strata {

void PerfectTracker::on_birth(std::uint64_t id, std::optional<std::uint64_t> parent,
                              TimePoint birth_time) {
  if (records_.count(id)) {
    throw std::invalid_argument("taxon id already tracked: " + std::to_string(id));
  }
  if (parent && !records_.count(*parent)) {
    throw std::invalid_argument("unknown parent id: " + std::to_string(*parent));
  }
  TaxonRecord rec;
  rec.parent = parent;
  rec.alive = true;
  rec.birth_time = birth_time;
  records_.emplace(id, rec);
  total_ops_ += 2;  // insertion + liveness flag
  if (parent) {
    if (mode_ == TrackingMode::Pruning) {
      ++records_[*parent].living_offspring_lineages;
      ++total_ops_;
    }
  } else {
    roots_.insert(id);
  }
}

void PerfectTracker::on_removal(std::uint64_t id) {
  auto it = records_.find(id);
  if (it == records_.end()) {
    throw std::invalid_argument("cannot remove untracked id: " + std::to_string(id));
  }
  if (!it->second.alive) {
    throw std::invalid_argument("taxon already dead: " + std::to_string(id));
  }
  it->second.alive = false;
  ++removal_ops_;
  ++total_ops_;
  if (mode_ == TrackingMode::Naive) return;

  // Ascend the newly extinct chain.
  while (it != records_.end() && !it->second.alive &&
         it->second.living_offspring_lineages == 0) {
    std::optional<std::uint64_t> parent = it->second.parent;
    records_.erase(it);
    ++removal_ops_;
    ++total_ops_;
    if (!parent) {
      roots_.erase(id);
      break;
    }
    it = records_.find(*parent);
    --it->second.living_offspring_lineages;
    ++removal_ops_;
    ++total_ops_;
    id = *parent;
  }
}

std::size_t PerfectTracker::prune_dead_stems() {
  // Children are not indexed, so build a transient lineage-child map; each
  // stem record has exactly one recorded child (its single living lineage).
  std::unordered_map<std::uint64_t, std::uint64_t> lineage_child;
  for (const auto& [id, rec] : records_) {
    if (rec.parent) lineage_child[*rec.parent] = id;
  }
  std::size_t erased = 0;
  std::vector<std::uint64_t> root_ids(roots_.begin(), roots_.end());
  for (std::uint64_t root : root_ids) {
    std::uint64_t cur = root;
    while (true) {
      auto it = records_.find(cur);
      if (it == records_.end() || it->second.alive ||
          it->second.living_offspring_lineages != 1) {
        break;
      }
      std::uint64_t child = lineage_child.at(cur);
      records_.erase(it);
      roots_.erase(cur);
      ++erased;
      ++total_ops_;
      records_[child].parent.reset();
      roots_.insert(child);
      cur = child;
    }
  }
  return erased;
}

const TaxonRecord& PerfectTracker::record(std::uint64_t id) const {
  auto it = records_.find(id);
  if (it == records_.end()) {
    throw std::out_of_range("untracked id: " + std::to_string(id));
  }
  return it->second;
}

std::vector<std::uint64_t> PerfectTracker::ids() const {
  std::vector<std::uint64_t> out;
  out.reserve(records_.size());
  for (const auto& [id, rec] : records_) out.push_back(id);
  return out;
}

PhyloTree PerfectTracker::extant_tree() const {
  PhyloTree tree;
  if (records_.empty()) return tree;

  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> children;
  children.reserve(records_.size());
  for (const auto& [id, rec] : records_) {
    if (rec.parent) children[*rec.parent].push_back(id);
  }
  for (auto& [id, kids] : children) std::sort(kids.begin(), kids.end());

  std::vector<std::uint64_t> root_ids(roots_.begin(), roots_.end());

  int tree_root;
  struct Frame {
    std::uint64_t taxon;
    int tree_parent;
  };
  std::vector<Frame> stack;

  if (root_ids.size() == 1) {
    const TaxonRecord& rec = records_.at(root_ids.front());
    tree_root = tree.add_root(static_cast<double>(rec.birth_time));
    stack.push_back({root_ids.front(), -1});
  } else {
    tree_root = tree.add_root(0.0);
    for (auto it = root_ids.rbegin(); it != root_ids.rend(); ++it) {
      stack.push_back({*it, tree_root});
    }
  }

  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const TaxonRecord& rec = records_.at(f.taxon);
    int node = f.tree_parent == -1
                   ? tree_root
                   : tree.add_child(f.tree_parent, static_cast<double>(rec.birth_time));

    auto kids_it = children.find(f.taxon);
    const bool has_kids = kids_it != children.end() && !kids_it->second.empty();
    if (rec.alive) {
      if (has_kids) {
        tree.add_child(node, static_cast<double>(rec.birth_time),
                       std::to_string(f.taxon));
      } else {
        tree.node(node).label = std::to_string(f.taxon);
      }
    }
    if (has_kids) {
      for (auto it = kids_it->second.rbegin(); it != kids_it->second.rend(); ++it) {
        stack.push_back({*it, node});
      }
    }
  }
  return tree;
}

}  // namespace strata
