#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "beltstab/errors.hpp"
#include "beltstab/graphs.hpp"
#include "beltstab/partition_scheme.hpp"

using namespace beltstab;
using namespace beltstab::graphs;

namespace {

// Union-find over the pair list, written without the library's helpers.
bool oracle_connected(int n, EdgeMask mask) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int slot = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++slot) {
      if ((mask >> slot) & 1u) parent[find(i)] = find(j);
    }
  }
  int roots = 0;
  for (int i = 0; i < n; ++i) roots += find(i) == i;
  return roots == 1;
}

std::size_t count_range(auto&& r) {
  std::size_t k = 0;
  for (auto&& g : r) {
    (void)g;
    ++k;
  }
  return k;
}

EdgeWeights random_weights(int n, std::mt19937_64& rng, double blo, double bhi, double vlo, double vhi) {
  EdgeWeights w(n);
  std::uniform_real_distribution<double> b(blo, bhi), v(vlo, vhi);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      w.set_b(i, j, b(rng));
      w.set_v(i, j, v(rng));
    }
  }
  return w;
}

}  // namespace

TEST_CASE("pair slots follow lexicographic order") {
  CHECK(pair_slot(4, 0, 1) == 0);
  CHECK(pair_slot(4, 0, 3) == 2);
  CHECK(pair_slot(4, 1, 2) == 3);
  CHECK(pair_slot(4, 3, 2) == 5);
  for (int n = 2; n <= 8; ++n) {
    for (int s = 0; s < pair_count(n); ++s) {
      const auto [i, j] = slot_pair(n, s);
      CHECK(pair_slot(n, i, j) == s);
    }
  }
}

TEST_CASE("graph enumeration counts") {
  CHECK(count_range(enumerate_graphs(1)) == 1);
  CHECK(count_range(enumerate_graphs(3)) == 8);
  CHECK(count_range(enumerate_graphs(4)) == 64);
  const std::size_t expected[] = {1, 1, 4, 38, 728};
  for (int n = 1; n <= 5; ++n) {
    std::size_t oracle = 0;
    for (EdgeMask m = 0; m < (EdgeMask{1} << pair_count(n)); ++m) oracle += oracle_connected(n, m);
    CHECK(oracle == expected[n - 1]);
    CHECK(count_range(enumerate_connected_graphs(n)) == expected[n - 1]);
  }
}

TEST_CASE("enumeration order is ascending in the mask") {
  EdgeMask last = 0;
  bool first = true;
  for (const auto& g : enumerate_connected_graphs(4)) {
    if (!first) CHECK(g.edges() > last);
    last = g.edges();
    first = false;
  }
}

TEST_CASE("trees follow Cayley's formula") {
  CHECK(enumerate_trees(2).size() == 1);
  CHECK(enumerate_trees(3).size() == 3);
  CHECK(enumerate_trees(4).size() == 16);
  for (int n = 2; n <= 7; ++n) {
    const auto trees = enumerate_trees(n);
    CHECK(trees.size() == static_cast<std::size_t>(std::llround(std::pow(n, n - 2))));
    std::set<EdgeMask> distinct;
    for (const auto& t : trees) {
      CHECK(t.graph().edge_count() == n - 1);
      CHECK(oracle_connected(n, t.edges()));
      distinct.insert(t.edges());
    }
    CHECK(distinct.size() == trees.size());
  }
}

TEST_CASE("connectivity agrees with the union-find oracle at n = 6") {
  for (EdgeMask m = 0; m < (EdgeMask{1} << pair_count(6)); m += 37) {
    CHECK(LabeledGraph(6, m).is_connected() == oracle_connected(6, m));
  }
}

TEST_CASE("vertex caps") {
  CHECK_THROWS_AS(check_vertex_cap(9), EnumerationCapError);
  CHECK_THROWS_AS(check_vertex_cap(0), EnumerationCapError);
  CHECK_THROWS_AS(product_expansion_check(7, EdgeWeights(7)), EnumerationCapError);
  CHECK_THROWS_AS(LabeledGraph(3, 0xFF), DomainError);
}

TEST_CASE("product expansion") {
  CHECK(product_expansion_check(4, EdgeWeights::uniform_b(4, 0.0)) == 0.0);
  CHECK(product_expansion_check(3, EdgeWeights::uniform_b(3, 1.0)) < 1e-15);
  std::mt19937_64 rng(2024);
  for (int draw = 0; draw < 20; ++draw) {
    CHECK(product_expansion_check(4, random_weights(4, rng, -0.5, 0.5, 0, 0)) <= 1e-12);
  }
}

TEST_CASE("component decomposition") {
  CHECK(component_decomposition_check(4, EdgeWeights::uniform_b(4, 0.0)) == 0.0);
  // n = 3, b = 1: 4 connected + 3 (pair and singleton) + 1 (all singletons) = 8
  const auto w = EdgeWeights::uniform_b(3, 1.0);
  CHECK(connected_sum(3, 0b111, w) == 4.0);
  double by_partition = 0.0;
  for (const auto& part : set_partitions(3)) {
    double t = 1.0;
    for (auto block : part) t *= connected_sum(3, block, w);
    by_partition += t;
  }
  CHECK(by_partition == 8.0);
  CHECK(set_partitions(4).size() == 15);
  CHECK(set_partitions(5).size() == 52);
  std::mt19937_64 rng(99);
  for (int draw = 0; draw < 20; ++draw) {
    CHECK(component_decomposition_check(5, random_weights(5, rng, -0.5, 0.5, 0, 0)) <= 1e-10);
  }
}

TEST_CASE("penrose map") {
  const auto path = LabeledGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(penrose_map(path, 2).graph() == path);
  const auto triangle = LabeledGraph::complete(3);
  CHECK(penrose_map(triangle, 0).graph() == LabeledGraph::from_edges(3, {{0, 1}, {0, 2}}));
  CHECK(penrose_map(LabeledGraph::complete(4), 0).graph() ==
        LabeledGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}));
  CHECK_THROWS_AS(penrose_map(LabeledGraph(3, 0b001), 0), DomainError);
}

TEST_CASE("penrose partition scheme") {
  CHECK(penrose_partition_check(2, 0));
  const auto& s3 = partition_scheme(3, 0);
  CHECK(s3.valid);
  CHECK(s3.connected_graph_count == 4);
  const auto star = Tree(LabeledGraph::from_edges(3, {{0, 1}, {0, 2}}));
  CHECK(s3.extra(star) == LabeledGraph::from_edges(3, {{1, 2}}).edges());
  CHECK(s3.extra(Tree(LabeledGraph::from_edges(3, {{0, 1}, {1, 2}}))) == 0);
  CHECK(s3.extra(Tree(LabeledGraph::from_edges(3, {{0, 2}, {1, 2}}))) == 0);

  const auto& s5 = partition_scheme(5, 0);
  CHECK(s5.valid);
  CHECK(s5.connected_graph_count == 728);
  CHECK(s5.extra_edges.size() == 125);
  for (int root = 0; root < 4; ++root) CHECK(penrose_partition_check(4, root));
}

TEST_CASE("every connected graph lies in the interval of its tree") {
  for (int n = 2; n <= 5; ++n) {
    const auto& s = partition_scheme(n, 0);
    for (const auto& g : enumerate_connected_graphs(n)) {
      const Tree t = penrose_map(g, 0);
      CHECK(g.contains(t.graph()));
      CHECK((g.edges() & ~(t.edges() | s.extra(t))) == 0);
    }
    for (const auto& t : enumerate_trees(n)) CHECK(penrose_map(t.graph(), 0) == t);
  }
}

TEST_CASE("penrose identity") {
  // e^{-v} = 2 on every pair: connected sum 4, tree side 1 + 1 + 1 * 2
  const auto w = EdgeWeights::uniform_v(3, -std::log(2.0));
  const auto& s = partition_scheme(3, 0);
  double tree_side = 0.0;
  for (const auto& t : enumerate_trees(3)) {
    tree_side += edge_product(3, t.edges(), [](int, int) { return 1.0; }) *
                 edge_product(3, s.extra(t), [](int, int) { return 2.0; });
  }
  CHECK(tree_side == doctest::Approx(4.0));
  CHECK(penrose_identity_check(3, w, 0) < 1e-14);
  CHECK(penrose_identity_check(2, EdgeWeights::uniform_v(2, 0.0), 0) == 0.0);

  std::mt19937_64 rng(5);
  for (int draw = 0; draw < 20; ++draw) {
    CHECK(penrose_identity_check(4, random_weights(4, rng, 0, 0, -0.4, 0.0), 0) <= 1e-10);
  }
}
