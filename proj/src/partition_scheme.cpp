#include "beltstab/partition_scheme.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "beltstab/errors.hpp"

namespace beltstab::graphs {

Tree penrose_map(const LabeledGraph& g, int root) {
  const int n = g.vertex_count();
  if (root < 0 || root >= n) throw DomainError("root outside the vertex range");
  if (!g.is_connected()) throw DomainError("penrose_map needs a connected graph");

  std::array<std::uint32_t, kMaxEnumerationVertices> adj{};
  for (int v = 0; v < n; ++v) adj[v] = g.neighbours(v);

  EdgeMask tree = 0;
  std::uint32_t seen = 1u << root;
  std::uint32_t layer = 1u << root;
  while (layer != 0) {
    std::uint32_t next = 0;
    for (std::uint32_t f = layer; f != 0; f &= f - 1) next |= adj[std::countr_zero(f)];
    next &= ~seen;
    for (std::uint32_t f = next; f != 0; f &= f - 1) {
      const int v = std::countr_zero(f);
      const int parent = std::countr_zero(adj[v] & layer);
      tree |= EdgeMask{1} << pair_slot(n, parent, v);
    }
    seen |= next;
    layer = next;
  }
  return Tree(LabeledGraph(n, tree));
}

PartitionScheme build_partition_scheme(int n, int root) {
  check_vertex_cap(n, kMaxIdentityVertices);
  if (root < 0 || root >= n) throw DomainError("root outside the vertex range");

  struct Group {
    EdgeMask union_mask = 0;
    std::size_t size = 0;
    bool all_contain_tree = true;
  };
  std::unordered_map<EdgeMask, Group> groups;

  PartitionScheme scheme;
  scheme.n = n;
  scheme.root = root;
  for (const LabeledGraph& g : enumerate_connected_graphs(n)) {
    const EdgeMask tau = penrose_map(g, root).edges();
    Group& grp = groups[tau];
    grp.union_mask |= g.edges();
    grp.size += 1;
    grp.all_contain_tree = grp.all_contain_tree && (g.edges() & tau) == tau;
    ++scheme.connected_graph_count;
  }

  bool valid = true;
  const auto trees = enumerate_trees(n);
  for (const Tree& t : trees) {
    const auto it = groups.find(t.edges());
    if (it == groups.end()) {
      valid = false;
      continue;
    }
    const Group& grp = it->second;
    const EdgeMask extra = grp.union_mask & ~t.edges();
    scheme.extra_edges[t.edges()] = extra;
    // Members are distinct, lie between tau and the union, and there are as
    // many of them as the interval has elements: the group is the interval.
    const std::size_t interval_size = std::size_t{1} << std::popcount(extra);
    valid = valid && grp.all_contain_tree && grp.size == interval_size;
  }
  scheme.valid = valid && groups.size() == trees.size();
  return scheme;
}

const PartitionScheme& partition_scheme(int n, int root) {
  static std::mutex mu;
  static std::unordered_map<int, PartitionScheme> cache;
  const int key = n * 16 + root;
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_partition_scheme(n, root)).first;
  return it->second;
}

bool penrose_partition_check(int n, int root) { return partition_scheme(n, root).valid; }

double penrose_identity_check(int n, const EdgeWeights& w, int root) {
  check_vertex_cap(n, kMaxIdentityVertices);
  if (w.vertex_count() != n) throw DomainError("weights defined on a different vertex count");
  const PartitionScheme& scheme = partition_scheme(n, root);
  if (!scheme.valid) {
    throw std::logic_error("partition scheme failed the boolean-interval check for n = " +
                           std::to_string(n));
  }
  const auto mayer = [&](int i, int j) { return std::expm1(-w.v(i, j)); };
  const auto boltzmann = [&](int i, int j) { return std::exp(-w.v(i, j)); };

  double graph_sum = 0.0;
  for (const LabeledGraph& g : enumerate_connected_graphs(n)) {
    graph_sum += edge_product(n, g.edges(), mayer);
  }
  double tree_sum = 0.0;
  for (const auto& [tau, extra] : scheme.extra_edges) {
    tree_sum += edge_product(n, tau, mayer) * edge_product(n, extra, boltzmann);
  }
  return std::abs(graph_sum - tree_sum) / std::max(1.0, std::abs(graph_sum));
}

}  // namespace beltstab::graphs
