#pragma once

// Penrose-style partition scheme: every connected graph is mapped to its
// breadth-first tree from a root, each vertex attached to its smallest-label
// neighbour in the previous layer. The preimage of a tree tau is then certified
// to be a boolean interval [tau, M(tau)], and the tree-graph identity
//
//   sum_{g connected} prod_{E(g)} (e^{-v}-1)
//     = sum_{tau} prod_{E(tau)} (e^{-v}-1) prod_{m(tau)} e^{-v},
//
// with m(tau) = E(M(tau)) \ E(tau), is evaluated on both sides.

#include <map>

#include "beltstab/graphs.hpp"

namespace beltstab::graphs {

/// Throws DomainError if g is disconnected or root is out of range.
Tree penrose_map(const LabeledGraph& g, int root);

struct PartitionScheme {
  int n = 0;
  int root = 0;
  /// tree mask -> extra-edge mask m(tau) (edges of M(tau) not in tau).
  std::map<EdgeMask, EdgeMask> extra_edges;
  /// Every preimage is exactly the interval [tau, M(tau)], and every tree is hit.
  bool valid = false;
  std::size_t connected_graph_count = 0;

  EdgeMask extra(const Tree& t) const { return extra_edges.at(t.edges()); }
};

/// Groups all connected graphs on n vertices by penrose_map and computes M(tau)
/// as the union of each group. Requires n <= kMaxIdentityVertices.
PartitionScheme build_partition_scheme(int n, int root);

/// Cached scheme for (n, root); thread-safe.
const PartitionScheme& partition_scheme(int n, int root);

bool penrose_partition_check(int n, int root);

/// Throws std::logic_error if the scheme fails validation.
double penrose_identity_check(int n, const EdgeWeights& w, int root);

}  // namespace beltstab::graphs
