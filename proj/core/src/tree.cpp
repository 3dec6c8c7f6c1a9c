#include "strata/tree.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace strata {
namespace {

std::string format_time(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

}  // namespace

int PhyloTree::add_root(double origin_time) {
  if (root_ != -1) throw std::logic_error("tree already has a root");
  nodes_.push_back(PhyloNode{origin_time, -1, {}, ""});
  root_ = 0;
  return 0;
}

int PhyloTree::add_child(int parent, double origin_time, std::string label) {
  if (parent < 0 || static_cast<std::size_t>(parent) >= nodes_.size()) {
    throw std::out_of_range("parent index out of range");
  }
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(PhyloNode{origin_time, parent, {}, std::move(label)});
  nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

std::vector<int> PhyloTree::labeled_tips() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].label.empty() && nodes_[i].children.empty()) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

std::vector<int> PhyloTree::path_from_root(int i) const {
  std::vector<int> path;
  for (int cur = i; cur != -1; cur = nodes_[static_cast<std::size_t>(cur)].parent) {
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void PhyloTree::collapse_unifurcations() {
  if (root_ == -1) return;

  int new_root = root_;
  while (nodes_[static_cast<std::size_t>(new_root)].children.size() == 1 &&
         nodes_[static_cast<std::size_t>(new_root)].label.empty()) {
    new_root = nodes_[static_cast<std::size_t>(new_root)].children.front();
  }

  PhyloTree compact;
  // Iterative copy, skipping unlabeled single-child nodes.
  struct Frame {
    int old_node;
    int new_parent;
  };
  std::vector<Frame> stack{{new_root, -1}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    int cur = f.old_node;
    while (nodes_[static_cast<std::size_t>(cur)].children.size() == 1 &&
           nodes_[static_cast<std::size_t>(cur)].label.empty()) {
      cur = nodes_[static_cast<std::size_t>(cur)].children.front();
    }
    const PhyloNode& src = nodes_[static_cast<std::size_t>(cur)];
    int copied = f.new_parent == -1 ? compact.add_root(src.origin_time)
                                    : compact.add_child(f.new_parent, src.origin_time);
    compact.node(copied).label = src.label;
    // Push in reverse so children keep their order in the compact tree.
    for (auto it = src.children.rbegin(); it != src.children.rend(); ++it) {
      stack.push_back({*it, copied});
    }
  }
  *this = std::move(compact);
}

namespace {

std::string canonical_subtree(const PhyloTree& tree, int i) {
  const PhyloNode& n = tree.node(i);
  if (n.children.empty()) {
    return "L(" + format_time(n.origin_time) + "," + n.label + ")";
  }
  std::vector<std::string> parts;
  parts.reserve(n.children.size());
  for (int c : n.children) parts.push_back(canonical_subtree(tree, c));
  std::sort(parts.begin(), parts.end());
  std::string out = "N(" + format_time(n.origin_time);
  if (!n.label.empty()) out += "," + n.label;
  for (auto& p : parts) {
    out += ";";
    out += p;
  }
  out += ")";
  return out;
}

}  // namespace

std::string canonical_form(const PhyloTree& tree) {
  if (tree.empty()) return "()";
  return canonical_subtree(tree, tree.root());
}

bool trees_equivalent(const PhyloTree& a, const PhyloTree& b) {
  return canonical_form(a) == canonical_form(b);
}

}  // namespace strata
