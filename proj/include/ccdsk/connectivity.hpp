#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ccdsk/network.hpp"

namespace ccdsk {

using VertexPair = std::pair<std::size_t, std::size_t>;

/// Multigraph whose edges may carry the label of the hyperedge they came from.
struct Multigraph {
  std::size_t vertices = 0;
  std::vector<VertexPair> edges;
  std::vector<std::size_t> tags;  // same length as edges, or empty
};

/// Replaces every hyperedge by the path through its vertices in the given
/// order. order[0] is the smallest client. Throws InputError if order is not
/// a permutation of the clients.
Multigraph induce_by_order(const Hypergraph& h, const std::vector<std::size_t>& order);

/// The plain multigraph viewed as a hypergraph with 2-vertex edges.
Hypergraph as_hypergraph(const Multigraph& g);

/// Maximum number of edge-disjoint spanning trees. Returns 0 for a
/// disconnected graph and edges+1 for a single vertex.
std::size_t tree_packing_number(const Multigraph& g);

/// `count` edge-disjoint spanning trees as edge-index lists into g.edges, or
/// nullopt when g does not contain that many.
std::optional<std::vector<std::vector<std::size_t>>> pack_spanning_trees(const Multigraph& g, std::size_t count);

struct VertexPartition {
  std::vector<std::size_t> block;  // block id per vertex, ids 0..blocks-1
  std::size_t blocks = 0;
};

struct PartitionCheck {
  bool holds = true;
  /// Partition with the largest shortfall, ties to the first in
  /// restricted-growth order.
  std::optional<VertexPartition> violation;
};

inline constexpr std::size_t kMaxPartitionVertices = 12;

/// Sum over edges of (blocks met - 1) >= tau (|P| - 1) for every partition P.
/// Throws SizeGuardError above 12 vertices.
PartitionCheck partition_bound(const Hypergraph& h, std::size_t tau);

/// At least tau (|P| - 1) edges meet two or more blocks, for every partition P.
/// Throws SizeGuardError above 12 vertices.
PartitionCheck tau_partition_connected(const Hypergraph& h, std::size_t tau);

/// M*(fam) <= messages - tau.
bool is_inherently_tau_connected(const MessageFamily& fam, std::size_t tau);

/// Ordinary connectivity of the hypergraph (clients joined by shared messages).
bool is_connected(const Hypergraph& h);

}  // namespace ccdsk
