#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "layerlab/graph.hpp"

namespace layerlab {

/// Node -> layer index. Nodes that a traversal could not reach are listed
/// in `unreachable` rather than silently dropped.
struct RankAssignment {
  std::optional<NodeId> source;
  std::map<NodeId, int> ranks;
  std::vector<NodeId> unreachable;

  bool covers(NodeId id) const { return ranks.count(id) != 0; }
  /// Throws InfeasibleError when `id` has no rank.
  int rank_of(NodeId id) const;
  /// One past the largest rank; 0 when empty.
  int layer_count() const;

  friend bool operator==(const RankAssignment&, const RankAssignment&) = default;
};

/// Ordered node sequences per layer. A node's index inside its layer is its
/// ordinal position.
struct LayeredOrdering {
  std::vector<std::vector<NodeId>> layers;

  std::size_t node_count() const;
  /// Nodes listed in ascending NodeId within each layer; layers 0..max rank.
  static LayeredOrdering from_ranks(const RankAssignment& ranks);
  /// Ranks implied by the layer each node sits in.
  RankAssignment to_ranks() const;
  /// Throws InfeasibleError if a node appears twice.
  void check_unique() const;

  friend bool operator==(const LayeredOrdering&, const LayeredOrdering&) = default;
};

/// BFS result: ranks plus the layer ordering in discovery order.
struct BfsLayering {
  RankAssignment ranks;
  LayeredOrdering ordering;
};

/// Unweighted shortest-path layering, edges treated as undirected.
/// Frontier nodes are expanded in discovery order and each node's
/// neighbours are visited in edge-list order, which reproduces the layer
/// orderings printed in the published prompts.
BfsLayering layered_bfs(const Graph& g, NodeId source);
RankAssignment assign_layers_bfs(const Graph& g, NodeId source);

Graph remove_same_layer_edges(const Graph& g, const RankAssignment& ranks);

enum class SweepDirection { Down, Alternating };

/// Median heuristic. One pass keys every node of layer i on the median
/// 0-based index of its neighbours in layer i+1 (0 when it has none) and
/// stable-sorts the layer, for i = 0..L-1. Alternating makes odd passes
/// run upward, keyed on layer i-1.
LayeredOrdering median_sweep(const LayeredOrdering& ordering, const Graph& g, int passes = 1,
                             SweepDirection direction = SweepDirection::Down);

/// Median of an index multiset; mean of the two middle values when even.
double median_of(std::vector<int> values);

struct CrossingPair {
  Edge first;
  Edge second;
};

struct CrossingFragment {
  long count = 0;
  std::vector<CrossingPair> pairs;
};

/// Crossings between two ordered node lists. Every edge must join one node
/// of `order_a` to one of `order_b` (either stored direction). Edges sharing
/// an endpoint never cross. O(E log E); pairs are only collected on request.
CrossingFragment count_crossings_bipartite(const std::vector<NodeId>& order_a,
                                           const std::vector<NodeId>& order_b,
                                           const std::vector<Edge>& edges,
                                           bool collect_pairs = false);

struct CrossingReport {
  long total = 0;
  std::vector<std::pair<std::size_t, long>> per_gap;
  std::optional<std::vector<CrossingPair>> pairs;
};

/// Sum of bipartite crossings over consecutive layers. Rejects edges that
/// do not span exactly one gap.
CrossingReport count_crossings_total(const LayeredOrdering& ordering, const Graph& g,
                                     bool collect_pairs = false);

/// Edges of `g` between layer `gap` and `gap + 1`, in edge-list order,
/// oriented from the upper layer to the lower one.
std::vector<Edge> gap_edges(const LayeredOrdering& ordering, const Graph& g, std::size_t gap);

long total_edge_length(const RankAssignment& ranks, const Graph& g);

/// Every node drawn independently and uniformly from 0..num_layers-1.
RankAssignment random_layering(const Graph& g, int num_layers, std::uint64_t seed);

/// Total, source at rank 0, and every node at rank k > 0 has a neighbour at
/// rank k - 1.
bool is_valid_layering(const Graph& g, const RankAssignment& ranks, NodeId source);

struct Point {
  double x = 0;
  double y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct GridPositions {
  std::map<NodeId, Point> positions;
  double spacing = 1.0;
};

GridPositions assign_coordinates(const LayeredOrdering& ordering, double spacing);

}  // namespace layerlab
