#include "strata/newick.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace strata {
namespace {

void write_length(std::string& out, double length) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", length);
  out += buf;
}

void write_subtree(const PhyloTree& tree, int i, double parent_time, std::string& out) {
  const PhyloNode& n = tree.node(i);
  if (!n.children.empty()) {
    out += '(';
    bool first = true;
    for (int c : n.children) {
      if (!first) out += ',';
      first = false;
      write_subtree(tree, c, n.origin_time, out);
    }
    out += ')';
  }
  out += n.label;
  out += ':';
  write_length(out, n.origin_time - parent_time);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  PhyloTree run() {
    PhyloTree tree;
    parse_node(tree, -1, 0.0);
    skip_space();
    if (!consume(';')) fail("expected ';'");
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    return tree;
  }

 private:
  void parse_node(PhyloTree& tree, int parent, double parent_time) {
    skip_space();
    // Children come first in the text, so the node is created with a
    // placeholder origin and patched once its own length is known.
    if (consume('(')) {
      int id = parent == -1 ? tree.add_root(0.0) : tree.add_child(parent, 0.0);
      do {
        parse_node(tree, id, 0.0);
      } while (consume(','));
      if (!consume(')')) fail("expected ')'");
      std::string label = parse_label();
      double length = parse_length();
      finish_node(tree, id, parent_time, label, length);
      return;
    }

    std::string label = parse_label();
    double length = parse_length();
    int id = parent == -1 ? tree.add_root(0.0) : tree.add_child(parent, 0.0);
    finish_node(tree, id, parent_time, label, length);
  }

  void finish_node(PhyloTree& tree, int id, double parent_time,
                   const std::string& label, double length) {
    PhyloNode& n = tree.node(id);
    n.label = label;
    double base = n.parent == -1 ? parent_time : tree.node(n.parent).origin_time;
    n.origin_time = base + length;
    // Children were parsed before the node's own origin was known; their
    // origins were accumulated against 0 and need shifting.
    shift_subtree(tree, id, n.origin_time);
  }

  void shift_subtree(PhyloTree& tree, int id, double node_origin) {
    for (int c : tree.node(id).children) {
      add_offset(tree, c, node_origin);
    }
  }

  void add_offset(PhyloTree& tree, int id, double offset) {
    tree.node(id).origin_time += offset;
    for (int c : tree.node(id).children) add_offset(tree, c, offset);
  }

  std::string parse_label() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  double parse_length() {
    skip_space();
    if (!consume(':')) return 0.0;
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) ++pos_;
    std::string_view num = text_.substr(start, pos_ - start);
    char* end = nullptr;
    std::string owned(num);
    double value = std::strtod(owned.c_str(), &end);
    if (owned.empty() || end != owned.c_str() + owned.size()) {
      fail("malformed branch length");
    }
    return value;
  }

  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == ',' || c == ':' || c == ';' ||
           std::isspace(static_cast<unsigned char>(c));
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  [[noreturn]] void fail(const char* what) {
    throw std::runtime_error("newick parse error at offset " + std::to_string(pos_) +
                             ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_newick(const PhyloTree& tree) {
  if (tree.empty()) return ";";
  std::string out;
  write_subtree(tree, tree.root(), 0.0, out);
  out += ';';
  return out;
}

PhyloTree parse_newick(std::string_view text) {
  return Parser(text).run();
}

}  // namespace strata
