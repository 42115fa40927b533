#pragma once

// Labeled graphs on small vertex sets, stored as bit masks over the n(n-1)/2
// vertex pairs in lexicographic order: (0,1), (0,2), ..., (0,n-1), (1,2), ...
// Ascending mask order is the deterministic enumeration order.

#include <compare>
#include <cstdint>
#include <optional>
#include <ranges>
#include <utility>
#include <vector>

namespace beltstab::graphs {

using EdgeMask = std::uint32_t;

inline constexpr int kMaxEnumerationVertices = 8;
inline constexpr int kMaxIdentityVertices = 6;

constexpr int pair_count(int n) { return n * (n - 1) / 2; }

/// Bit position of the pair {i, j} (i != j, order irrelevant).
int pair_slot(int n, int i, int j);
std::pair<int, int> slot_pair(int n, int slot);

class LabeledGraph {
 public:
  LabeledGraph() = default;
  /// Throws DomainError if n is out of [1, 8] or mask has bits beyond the pair count.
  LabeledGraph(int n, EdgeMask edges);

  static LabeledGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
  static LabeledGraph complete(int n);

  int vertex_count() const { return n_; }
  EdgeMask edges() const { return edges_; }
  int edge_count() const;
  bool has_edge(int i, int j) const;
  std::vector<std::pair<int, int>> edge_list() const;

  /// Neighbour bit mask of vertex v.
  std::uint32_t neighbours(int v) const;
  bool is_connected() const;

  /// True iff every edge of `sub` is an edge of this graph.
  bool contains(const LabeledGraph& sub) const;

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;
  friend auto operator<=>(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  int n_ = 1;
  EdgeMask edges_ = 0;
};

/// A connected graph with exactly n-1 edges.
class Tree {
 public:
  /// Throws DomainError unless g is a tree.
  explicit Tree(LabeledGraph g);
  static std::optional<Tree> try_from(const LabeledGraph& g);

  const LabeledGraph& graph() const { return g_; }
  int vertex_count() const { return g_.vertex_count(); }
  EdgeMask edges() const { return g_.edges(); }

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  LabeledGraph g_;
};

/// Throws EnumerationCapError unless 1 <= n <= cap.
void check_vertex_cap(int n, int cap = kMaxEnumerationVertices);

/// Lazy view over the graphs whose masks lie in [first, last): the unit of
/// work when enumeration is split across workers.
inline auto graphs_in_range(int n, EdgeMask first, EdgeMask last) {
  return std::views::iota(first, last) |
         std::views::transform([n](EdgeMask m) { return LabeledGraph(n, m); });
}

/// All 2^(n(n-1)/2) labeled graphs on n vertices, ascending mask order.
inline auto enumerate_graphs(int n) {
  check_vertex_cap(n);
  return graphs_in_range(n, 0, EdgeMask{1} << pair_count(n));
}

/// Connected labeled graphs on n vertices, ascending mask order.
inline auto enumerate_connected_graphs(int n) {
  return enumerate_graphs(n) |
         std::views::filter([](const LabeledGraph& g) { return g.is_connected(); });
}

/// All n^(n-2) labeled trees, built by decoding every Pruefer sequence, then
/// sorted by mask.
std::vector<Tree> enumerate_trees(int n);

/// Decodes a Pruefer sequence of length n-2 over {0..n-1}.
Tree tree_from_pruefer(int n, const std::vector<int>& code);

/// Symmetric pair weights for the expansion identities. `b` are the generic
/// expansion weights; `v` are potential values used in e^{-v} - 1 forms.
class EdgeWeights {
 public:
  explicit EdgeWeights(int n);

  int vertex_count() const { return n_; }
  double b(int i, int j) const { return b_[slot(i, j)]; }
  double v(int i, int j) const { return v_[slot(i, j)]; }
  void set_b(int i, int j, double value) { b_[slot(i, j)] = value; }
  void set_v(int i, int j, double value) { v_[slot(i, j)] = value; }

  static EdgeWeights uniform_b(int n, double b);
  static EdgeWeights uniform_v(int n, double v);

 private:
  std::size_t slot(int i, int j) const;
  int n_;
  std::vector<double> b_;
  std::vector<double> v_;
};

/// Product of `factor(i, j)` over the edges of mask.
template <class F>
double edge_product(int n, EdgeMask mask, F&& factor) {
  double p = 1.0;
  for (int s = 0; mask != 0; ++s, mask >>= 1) {
    if (mask & 1u) {
      const auto [i, j] = slot_pair(n, s);
      p *= factor(i, j);
    }
  }
  return p;
}

// Identity checks. Each returns a residual normalised by max(1, |reference|);
// all require n <= kMaxIdentityVertices.

/// prod_{i<j}(b_ij + 1) against the sum over all graphs of prod_{E(g)} b_ij.
double product_expansion_check(int n, const EdgeWeights& w);

/// Sum over all graphs against the sum over set partitions of the product of
/// per-block connected-graph sums.
double component_decomposition_check(int n, const EdgeWeights& w);

/// Sum over connected graphs on the vertex subset `vertices` (bit mask over
/// {0..n-1}) of prod_{E(g)} b_ij.
double connected_sum(int n, std::uint32_t vertices, const EdgeWeights& w);

/// All set partitions of {0..n-1}, each as a list of block masks.
std::vector<std::vector<std::uint32_t>> set_partitions(int n);

}  // namespace beltstab::graphs
