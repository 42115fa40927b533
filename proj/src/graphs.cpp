#include "beltstab/graphs.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "beltstab/errors.hpp"

namespace beltstab::graphs {

namespace {

struct SlotTable {
  std::array<std::array<std::pair<int, int>, 28>, kMaxEnumerationVertices + 1> pairs{};
  std::array<std::array<std::array<int, 8>, 8>, kMaxEnumerationVertices + 1> slots{};

  constexpr SlotTable() {
    for (int n = 1; n <= kMaxEnumerationVertices; ++n) {
      int s = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          pairs[n][s] = {i, j};
          slots[n][i][j] = s;
          slots[n][j][i] = s;
          ++s;
        }
      }
    }
  }
};

constexpr SlotTable kSlots{};

void check_vertex(int n, int v) {
  if (v < 0 || v >= n) {
    throw DomainError("vertex " + std::to_string(v) + " outside [0, " + std::to_string(n) + ")");
  }
}

}  // namespace

void check_vertex_cap(int n, int cap) {
  if (n < 1 || n > cap) {
    throw EnumerationCapError("vertex count " + std::to_string(n) +
                              " outside the supported range [1, " + std::to_string(cap) + "]");
  }
}

int pair_slot(int n, int i, int j) {
  check_vertex(n, i);
  check_vertex(n, j);
  if (i == j) throw DomainError("self-loops are not allowed");
  return kSlots.slots[n][i][j];
}

std::pair<int, int> slot_pair(int n, int slot) { return kSlots.pairs[n][slot]; }

LabeledGraph::LabeledGraph(int n, EdgeMask edges) : n_(n), edges_(edges) {
  if (n < 1 || n > kMaxEnumerationVertices) {
    throw DomainError("graph vertex count must lie in [1, 8], got " + std::to_string(n));
  }
  const int pairs = pair_count(n);
  if (pairs < 32 && (edges >> pairs) != 0) {
    throw DomainError("edge mask has bits beyond the pair count");
  }
}

LabeledGraph LabeledGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  LabeledGraph g(n, 0);
  for (const auto& [i, j] : edges) {
    const EdgeMask bit = EdgeMask{1} << pair_slot(n, i, j);
    if (g.edges_ & bit) throw DomainError("duplicate edge");
    g.edges_ |= bit;
  }
  return g;
}

LabeledGraph LabeledGraph::complete(int n) {
  return LabeledGraph(n, (EdgeMask{1} << pair_count(n)) - 1);
}

int LabeledGraph::edge_count() const { return std::popcount(edges_); }

bool LabeledGraph::has_edge(int i, int j) const {
  return (edges_ >> pair_slot(n_, i, j)) & 1u;
}

std::vector<std::pair<int, int>> LabeledGraph::edge_list() const {
  std::vector<std::pair<int, int>> out;
  for (int s = 0; s < pair_count(n_); ++s) {
    if ((edges_ >> s) & 1u) out.push_back(slot_pair(n_, s));
  }
  return out;
}

std::uint32_t LabeledGraph::neighbours(int v) const {
  std::uint32_t nb = 0;
  for (int u = 0; u < n_; ++u) {
    if (u != v && ((edges_ >> kSlots.slots[n_][u][v]) & 1u)) nb |= 1u << u;
  }
  return nb;
}

bool LabeledGraph::is_connected() const {
  std::array<std::uint32_t, kMaxEnumerationVertices> adj{};
  EdgeMask m = edges_;
  for (int s = 0; m != 0; ++s, m >>= 1) {
    if (m & 1u) {
      const auto [i, j] = kSlots.pairs[n_][s];
      adj[i] |= 1u << j;
      adj[j] |= 1u << i;
    }
  }
  const std::uint32_t all = (1u << n_) - 1;
  std::uint32_t seen = 1u;
  std::uint32_t frontier = 1u;
  while (frontier != 0) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f != 0; f &= f - 1) {
      next |= adj[std::countr_zero(f)];
    }
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == all;
}

bool LabeledGraph::contains(const LabeledGraph& sub) const {
  return sub.n_ == n_ && (sub.edges_ & ~edges_) == 0;
}

Tree::Tree(LabeledGraph g) : g_(g) {
  if (g.edge_count() != g.vertex_count() - 1 || !g.is_connected()) {
    throw DomainError("graph is not a tree");
  }
}

std::optional<Tree> Tree::try_from(const LabeledGraph& g) {
  if (g.edge_count() != g.vertex_count() - 1 || !g.is_connected()) return std::nullopt;
  return Tree(g);
}

Tree tree_from_pruefer(int n, const std::vector<int>& code) {
  if (n == 1) return Tree(LabeledGraph(1, 0));
  if (static_cast<int>(code.size()) != n - 2) {
    throw DomainError("Pruefer sequence must have length n - 2");
  }
  std::vector<int> degree(n, 1);
  for (int c : code) {
    check_vertex(n, c);
    ++degree[c];
  }
  EdgeMask mask = 0;
  for (int c : code) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    mask |= EdgeMask{1} << kSlots.slots[n][leaf][c];
    --degree[leaf];
    --degree[c];
  }
  int u = -1;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) {
      if (u < 0) {
        u = v;
      } else {
        mask |= EdgeMask{1} << kSlots.slots[n][u][v];
        break;
      }
    }
  }
  return Tree(LabeledGraph(n, mask));
}

std::vector<Tree> enumerate_trees(int n) {
  check_vertex_cap(n);
  std::vector<Tree> out;
  if (n <= 2) {
    out.emplace_back(LabeledGraph::complete(n));
    return out;
  }
  std::vector<int> code(n - 2, 0);
  while (true) {
    out.push_back(tree_from_pruefer(n, code));
    int k = n - 3;
    while (k >= 0 && code[k] == n - 1) {
      code[k] = 0;
      --k;
    }
    if (k < 0) break;
    ++code[k];
  }
  std::sort(out.begin(), out.end(),
            [](const Tree& a, const Tree& b) { return a.edges() < b.edges(); });
  return out;
}

EdgeWeights::EdgeWeights(int n) : n_(n) {
  check_vertex_cap(n);
  b_.assign(static_cast<std::size_t>(pair_count(n)), 0.0);
  v_.assign(static_cast<std::size_t>(pair_count(n)), 0.0);
}

std::size_t EdgeWeights::slot(int i, int j) const {
  return static_cast<std::size_t>(pair_slot(n_, i, j));
}

EdgeWeights EdgeWeights::uniform_b(int n, double b) {
  EdgeWeights w(n);
  std::fill(w.b_.begin(), w.b_.end(), b);
  return w;
}

EdgeWeights EdgeWeights::uniform_v(int n, double v) {
  EdgeWeights w(n);
  std::fill(w.v_.begin(), w.v_.end(), v);
  return w;
}

namespace {

double normalised_residual(double reference, double other) {
  return std::abs(reference - other) / std::max(1.0, std::abs(reference));
}

void require_weights(int n, const EdgeWeights& w) {
  check_vertex_cap(n, kMaxIdentityVertices);
  if (w.vertex_count() != n) throw DomainError("weights defined on a different vertex count");
}

double all_graph_sum(int n, const EdgeWeights& w) {
  double sum = 0.0;
  for (const LabeledGraph& g : enumerate_graphs(n)) {
    sum += edge_product(n, g.edges(), [&](int i, int j) { return w.b(i, j); });
  }
  return sum;
}

}  // namespace

double product_expansion_check(int n, const EdgeWeights& w) {
  require_weights(n, w);
  double product = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) product *= w.b(i, j) + 1.0;
  }
  return normalised_residual(product, all_graph_sum(n, w));
}

double connected_sum(int n, std::uint32_t vertices, const EdgeWeights& w) {
  std::vector<int> labels;
  for (int v = 0; v < n; ++v) {
    if ((vertices >> v) & 1u) labels.push_back(v);
  }
  const int k = static_cast<int>(labels.size());
  if (k == 0) return 0.0;
  double sum = 0.0;
  for (const LabeledGraph& g : enumerate_connected_graphs(k)) {
    sum += edge_product(k, g.edges(), [&](int a, int b) { return w.b(labels[a], labels[b]); });
  }
  return sum;
}

std::vector<std::vector<std::uint32_t>> set_partitions(int n) {
  check_vertex_cap(n);
  // Restricted growth strings: block[0] = 0, block[i] <= 1 + max(block[0..i-1]).
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<int> block(n, 0);
  while (true) {
    const int blocks = *std::max_element(block.begin(), block.end()) + 1;
    std::vector<std::uint32_t> part(static_cast<std::size_t>(blocks), 0);
    for (int v = 0; v < n; ++v) part[block[v]] |= 1u << v;
    out.push_back(std::move(part));

    int i = n - 1;
    for (; i > 0; --i) {
      const int prefix_max = *std::max_element(block.begin(), block.begin() + i);
      if (block[i] <= prefix_max) break;
    }
    if (i == 0) break;
    ++block[i];
    std::fill(block.begin() + i + 1, block.end(), 0);
  }
  return out;
}

double component_decomposition_check(int n, const EdgeWeights& w) {
  require_weights(n, w);
  std::vector<double> per_subset(std::size_t{1} << n, 0.0);
  for (std::uint32_t s = 1; s < (1u << n); ++s) per_subset[s] = connected_sum(n, s, w);

  double by_partition = 0.0;
  for (const auto& partition : set_partitions(n)) {
    double term = 1.0;
    for (std::uint32_t block : partition) term *= per_subset[block];
    by_partition += term;
  }
  return normalised_residual(all_graph_sum(n, w), by_partition);
}

}  // namespace beltstab::graphs
