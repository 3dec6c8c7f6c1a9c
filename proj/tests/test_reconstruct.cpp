#include <doctest.h>

#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "strata/newick.hpp"
#include "strata/reconstruct.hpp"

using namespace strata;

namespace {

PopulationMember member(std::string id, const StratColumn& column) {
  return {std::move(id), column};
}

}  // namespace

TEST_CASE("single column reconstructs to a lone tip") {
  StratColumn column(PolicySpec::fixed_resolution(1), 64, 5);
  for (int i = 0; i < 3; ++i) column.deposit();
  std::vector<PopulationMember> population{member("x", column)};
  PhyloTree tree = trie_to_tree(build_trie(population), PolytomyMode::Keep);
  CHECK(to_newick(tree) == "x:3;");
}

TEST_CASE("two diverged columns fork at the last shared stratum") {
  StratColumn parent(PolicySpec::fixed_resolution(1), 64, 6);
  for (int i = 0; i < 5; ++i) parent.deposit();  // depth 5
  StratColumn a = parent.inherit();
  StratColumn b = parent.inherit();
  for (int i = 0; i < 3; ++i) {
    a.deposit();
    b.deposit();
  }
  std::vector<PopulationMember> population{member("a", a), member("b", b)};
  PhyloTree tree = trie_to_tree(build_trie(population), PolytomyMode::Keep);

  REQUIRE(tree.node(tree.root()).children.size() == 2);
  CHECK(tree.node(tree.root()).origin_time == doctest::Approx(5.0));
  auto bounds = mrca_bounds(a, b);
  REQUIRE(bounds.has_value());
  CHECK(static_cast<TimePoint>(tree.node(tree.root()).origin_time) >= bounds->lower);
  CHECK(static_cast<TimePoint>(tree.node(tree.root()).origin_time) <= bounds->upper);
}

TEST_CASE("independent founders hang off a common root at time zero") {
  std::vector<PopulationMember> population;
  for (int i = 0; i < 5; ++i) {
    StratColumn column(PolicySpec::fixed_resolution(1), 64, 100 + i);
    for (int k = 0; k < 4; ++k) column.deposit();
    population.push_back(member("f" + std::to_string(i), column));
  }
  PhyloTree tree = trie_to_tree(build_trie(population), PolytomyMode::Keep);
  CHECK(tree.node(tree.root()).origin_time == doctest::Approx(0.0));
  CHECK(tree.node(tree.root()).children.size() == 5);
}

TEST_CASE("identical columns become sibling tips at the terminal node") {
  StratColumn column(PolicySpec::fixed_resolution(1), 64, 50);
  for (int i = 0; i < 4; ++i) column.deposit();
  std::vector<PopulationMember> population{member("t1", column), member("t2", column),
                                           member("t3", column)};
  PhyloTree tree = trie_to_tree(build_trie(population), PolytomyMode::Keep);
  const PhyloNode& root = tree.node(tree.root());
  CHECK(root.children.size() == 3);
  for (int c : root.children) {
    CHECK(tree.node(c).origin_time == doctest::Approx(root.origin_time));
    CHECK(!tree.node(c).label.empty());
  }
}

TEST_CASE("mixed populations are rejected") {
  StratColumn a(PolicySpec::fixed_resolution(1), 64, 1);
  StratColumn b(PolicySpec::fixed_resolution(2), 64, 2);
  StratColumn c(PolicySpec::fixed_resolution(1), 8, 3);
  a.deposit();
  b.deposit();
  c.deposit();
  std::vector<PopulationMember> mixed_policy{member("a", a), member("b", b)};
  CHECK_THROWS_AS(build_trie(mixed_policy), std::invalid_argument);
  std::vector<PopulationMember> mixed_width{member("a", a), member("c", c)};
  CHECK_THROWS_AS(build_trie(mixed_width), std::invalid_argument);
  std::vector<PopulationMember> with_empty{
      member("a", a),
      member("e", StratColumn::make_empty(PolicySpec::fixed_resolution(1), 64, 9))};
  CHECK_THROWS_AS(build_trie(with_empty), std::invalid_argument);
}

TEST_CASE("wildcard insertion hops across pruned time points") {
  // The shallow record keeps {0,2,4}; the deeper one pruned time 2 down to
  // {0,4,8}. Inserting shallow first leaves a time-2 node the deep record
  // must hop over. Shared prefix makes the hop unambiguous.
  StratColumn base(PolicySpec::depth_proportional(2), 64, 12);
  for (int i = 0; i < 4; ++i) base.deposit();  // depth 4: {0,2,4}
  StratColumn shallow = base;
  StratColumn deep = base;
  for (int i = 0; i < 4; ++i) deep.deposit();  // depth 8: {0,4,8}
  REQUIRE(shallow.retained_times() == std::vector<TimePoint>{0, 2, 4});
  REQUIRE(deep.retained_times() == std::vector<TimePoint>{0, 4, 8});

  std::vector<PopulationMember> population{member("s", shallow), member("d", deep)};
  TrieStats stats;
  ReconstructionTrie trie = build_trie(population, &stats);
  CHECK(stats.wildcard_sites >= 1);
  CHECK(stats.paths_explored >= 1);

  PhyloTree tree = trie_to_tree(trie, PolytomyMode::Keep);
  // The deep record descends through the shallow one's path: the shallow tip
  // attaches at time 4 and the deep tip continues to time 8.
  auto tips = tree.labeled_tips();
  REQUIRE(tips.size() == 2);
  for (int tip : tips) {
    if (tree.node(tip).label == "s") {
      CHECK(tree.node(tip).origin_time == doctest::Approx(4.0));
    } else {
      CHECK(tree.node(tip).origin_time == doctest::Approx(8.0));
    }
  }
}

TEST_CASE("wildcard exploration stays within the branching bound") {
  // Mixed depths under an aggressively pruning policy at 1-bit fingerprints:
  // the deepest records must hop over several pruned time points whose
  // branches can collide. d = 2 possible values, q = wildcard positions.
  StratColumn base(PolicySpec::depth_proportional(1), 1, 321);
  std::vector<PopulationMember> population;
  for (int depth_step = 0; depth_step < 6; ++depth_step) {
    for (int i = 0; i < 3; ++i) base.deposit();
    StratColumn branch = base.inherit();
    branch.deposit();
    population.push_back({"m" + std::to_string(depth_step), branch});
  }
  TrieStats stats;
  build_trie(population, &stats);
  CHECK(stats.wildcard_sites >= 1);
  CHECK(stats.paths_explored >= stats.wildcard_sites);
  if (stats.wildcard_sites < 60) {
    CHECK(static_cast<double>(stats.max_paths_single_insert) <=
          std::pow(2.0, static_cast<double>(stats.wildcard_sites)));
  }
}

TEST_CASE("insertion order is canonical: input permutation cannot change the tree") {
  StratColumn parent(PolicySpec::fixed_resolution(1), 64, 30);
  for (int i = 0; i < 3; ++i) parent.deposit();
  StratColumn a = parent.inherit();
  StratColumn b = parent.inherit();
  StratColumn c = parent.inherit();
  for (int i = 0; i < 2; ++i) {
    a.deposit();
    b.deposit();
    c.deposit();
  }
  std::vector<PopulationMember> p1{member("a", a), member("b", b), member("c", c)};
  std::vector<PopulationMember> p2{member("c", c), member("a", a), member("b", b)};
  CHECK(trees_equivalent(trie_to_tree(build_trie(p1), PolytomyMode::Keep),
                         trie_to_tree(build_trie(p2), PolytomyMode::Keep)));
}

TEST_CASE("polytomy handling: keep vs bifurcate") {
  StratColumn parent(PolicySpec::fixed_resolution(1), 64, 60);
  for (int i = 0; i < 2; ++i) parent.deposit();  // depth 2
  StratColumn a = parent.inherit();
  StratColumn b = parent.inherit();
  StratColumn c = parent.inherit();
  std::vector<PopulationMember> population{member("a", a), member("b", b),
                                           member("c", c)};

  PhyloTree keep = trie_to_tree(build_trie(population), PolytomyMode::Keep);
  CHECK(keep.node(keep.root()).children.size() == 3);

  PhyloTree split = trie_to_tree(build_trie(population), PolytomyMode::Bifurcate);
  // every internal node is now binary, and the extra internal edge has zero length
  int internal_count = 0;
  for (std::size_t i = 0; i < split.size(); ++i) {
    const PhyloNode& node = split.node(static_cast<int>(i));
    if (!node.children.empty()) {
      ++internal_count;
      CHECK(node.children.size() == 2);
    }
  }
  CHECK(internal_count == 2);
  const PhyloNode& root = split.node(split.root());
  bool has_zero_internal_edge = false;
  for (int c : root.children) {
    if (!split.node(c).children.empty() &&
        split.node(c).origin_time == root.origin_time) {
      has_zero_internal_edge = true;
    }
  }
  CHECK(has_zero_internal_edge);
  // same tips either way
  CHECK(keep.labeled_tips().size() == 3);
  CHECK(split.labeled_tips().size() == 3);
}

TEST_CASE("origin-time correction: negligible at width 64") {
  StratColumn parent(PolicySpec::fixed_resolution(1), 64, 70);
  for (int i = 0; i < 4; ++i) parent.deposit();
  StratColumn a = parent.inherit();
  StratColumn b = parent.inherit();
  std::vector<PopulationMember> population{member("a", a), member("b", b)};
  PhyloTree tree = trie_to_tree(build_trie(population), PolytomyMode::Keep);
  PhyloTree corrected = correct_origin_times(tree, 64);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    CHECK(corrected.node(static_cast<int>(i)).origin_time ==
          doctest::Approx(tree.node(static_cast<int>(i)).origin_time));
  }
}

TEST_CASE("origin-time correction: unit shift at width 1 with unit gaps") {
  PhyloTree tree;
  int root = tree.add_root(4.0);
  tree.add_child(root, 5.0, "a");
  tree.add_child(root, 5.0, "b");
  PhyloTree corrected = correct_origin_times(tree, 1);
  // expected spurious matches at w=1 is 1; local mean gap is 1
  CHECK(corrected.node(corrected.root()).origin_time == doctest::Approx(3.0));
  // tips untouched
  for (int tip : corrected.labeled_tips()) {
    CHECK(corrected.node(tip).origin_time == doctest::Approx(5.0));
  }
}

TEST_CASE("origin-time correction clamps at zero and at the parent") {
  PhyloTree tree;
  int root = tree.add_root(0.0);
  int mid = tree.add_child(root, 1.0);
  tree.add_child(mid, 2.0, "a");
  tree.add_child(mid, 2.0, "b");
  tree.add_child(root, 1.0, "c");
  PhyloTree corrected = correct_origin_times(tree, 1);
  CHECK(corrected.node(corrected.root()).origin_time == doctest::Approx(0.0));
  int shifted_mid = -1;
  for (int c : corrected.node(corrected.root()).children) {
    if (!corrected.node(c).children.empty()) shifted_mid = c;
  }
  REQUIRE(shifted_mid != -1);
  CHECK(corrected.node(shifted_mid).origin_time >=
        corrected.node(corrected.root()).origin_time);
}

TEST_CASE("every reconstructed fork lies inside its leaf pair's window") {
  // Build a pruned-lineage population by hand: one founder, staggered splits.
  StratColumn trunk(PolicySpec::depth_proportional(4), 64, 99);
  std::vector<PopulationMember> population;
  std::vector<StratColumn> branches;
  for (int split = 0; split < 4; ++split) {
    for (int i = 0; i < 7; ++i) trunk.deposit();
    branches.push_back(trunk.inherit());
  }
  for (auto& branch : branches) {
    while (branch.depth() < trunk.depth()) branch.deposit();
  }
  branches.push_back(trunk);
  for (std::size_t i = 0; i < branches.size(); ++i) {
    population.push_back({"b" + std::to_string(i), branches[i]});
  }

  PhyloTree tree = trie_to_tree(build_trie(population), PolytomyMode::Keep);

  // For each internal node, pick leaves from two different child subtrees and
  // check the fork time against their divergence window.
  auto leaves_under = [&](int node) {
    std::vector<int> out, stack{node};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      if (tree.node(cur).children.empty() && !tree.node(cur).label.empty()) {
        out.push_back(cur);
      }
      for (int c : tree.node(cur).children) stack.push_back(c);
    }
    return out;
  };
  auto column_of = [&](const std::string& id) -> const StratColumn& {
    for (const auto& member : population) {
      if (member.id == id) return member.column;
    }
    throw std::logic_error("unknown id");
  };

  int checked = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const PhyloNode& node = tree.node(static_cast<int>(i));
    if (node.children.size() < 2) continue;
    for (std::size_t a = 0; a < node.children.size(); ++a) {
      for (std::size_t b = a + 1; b < node.children.size(); ++b) {
        auto la = leaves_under(node.children[a]);
        auto lb = leaves_under(node.children[b]);
        if (la.empty() || lb.empty()) continue;
        auto window = mrca_bounds(column_of(tree.node(la.front()).label),
                                  column_of(tree.node(lb.front()).label));
        REQUIRE(window.has_value());
        TimePoint fork = static_cast<TimePoint>(node.origin_time);
        REQUIRE(fork >= window->lower);
        REQUIRE(fork <= window->upper);
        ++checked;
      }
    }
  }
  CHECK(checked >= 3);
}

TEST_CASE("pairwise matrix is symmetric with self-comparisons on the diagonal") {
  StratColumn parent(PolicySpec::fixed_resolution(1), 64, 80);
  for (int i = 0; i < 3; ++i) parent.deposit();
  StratColumn a = parent.inherit();
  StratColumn b = parent.inherit();
  std::vector<PopulationMember> population{member("a", a), member("b", b)};
  auto matrix = pairwise_mrca_matrix(population);
  REQUIRE(matrix.size() == 2);
  REQUIRE(matrix[0][0].has_value());
  CHECK(matrix[0][0]->lower == a.depth());
  CHECK(matrix[0][0]->upper == a.depth());
  REQUIRE(matrix[0][1].has_value());
  CHECK(matrix[0][1]->lower == matrix[1][0]->lower);
  CHECK(matrix[0][1]->upper == matrix[1][0]->upper);
  CHECK(matrix[0][1]->lower == 3);
}

TEST_CASE("population of two yields a single off-diagonal entry equal to mrca_bounds") {
  StratColumn parent(PolicySpec::recency_proportional(2), 64, 90);
  for (int i = 0; i < 6; ++i) parent.deposit();
  StratColumn a = parent.inherit();
  StratColumn b = parent.inherit();
  for (int i = 0; i < 4; ++i) {
    a.deposit();
    b.deposit();
  }
  std::vector<PopulationMember> population{member("a", a), member("b", b)};
  auto matrix = pairwise_mrca_matrix(population);
  auto direct = mrca_bounds(a, b);
  REQUIRE(direct.has_value());
  REQUIRE(matrix[0][1].has_value());
  CHECK(matrix[0][1]->lower == direct->lower);
  CHECK(matrix[0][1]->upper == direct->upper);
}
