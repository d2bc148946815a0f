#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace layerlab {

using NodeId = std::uint32_t;
using Date = std::chrono::year_month_day;

struct Node {
  NodeId id = 0;
  std::optional<std::string> label;
  std::optional<Date> timestamp;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId source = 0;
  NodeId target = 0;
  std::optional<double> weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable node set plus ordered edge multiset.
///
/// Edge order is preserved exactly as given; prompts serialize edges in
/// input order, so reordering would change the generated text.
class Graph {
 public:
  Graph() = default;
  /// Throws GraphError on duplicate node ids, dangling endpoints, or
  /// non-positive / non-finite weights.
  Graph(std::vector<Node> nodes, std::vector<Edge> edges, bool directed = true);

  /// Nodes 0..n-1 without attributes, plus unweighted edges.
  static Graph from_pairs(std::size_t node_count,
                          const std::vector<std::pair<NodeId, NodeId>>& pairs,
                          bool directed = true);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool directed() const noexcept { return directed_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  bool contains(NodeId id) const { return index_.count(id) != 0; }
  /// Position of `id` in nodes(); throws GraphError for unknown ids.
  std::size_t index_of(NodeId id) const;
  const Node& node(NodeId id) const { return nodes_[index_of(id)]; }
  /// Label when present, decimal id otherwise.
  std::string name(NodeId id) const;

  bool has_weights() const;
  bool has_labels() const;
  bool has_timestamps() const;

  /// Same nodes, different edge list.
  Graph with_edges(std::vector<Edge> edges) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  bool directed_ = true;
  std::unordered_map<NodeId, std::size_t> index_;
};

enum class GraphFormat { GraphMLSubset, EdgeListText, JsonGraph, DotSubset };

std::string_view to_string(GraphFormat format);
/// Accepts "graphml", "edgelist", "json", "dot" (case-insensitive).
GraphFormat parse_graph_format(std::string_view name);
/// Guesses from a file extension; nullopt when unknown.
std::optional<GraphFormat> format_from_extension(std::string_view path);

struct EmitOptions {
  bool allow_lossy = false;
};

Graph parse_graph(std::string_view text, GraphFormat format);
std::string emit_graph(const Graph& g, GraphFormat format, const EmitOptions& options = {});

std::string format_date(const Date& date);
/// Parses YYYY-MM-DD; nullopt on malformed or impossible dates.
std::optional<Date> parse_date(std::string_view text);

struct DateRange {
  Date first;
  Date last;
};

struct GeneratorOptions {
  bool simple = true;
  bool connected = false;
  bool directed = false;
  NodeId first_id = 0;
  std::optional<DateRange> timestamps;
  /// Every weight drawn from (bound, bound + 10].
  std::optional<double> weight_lower_bound;
};

/// Deterministic in (n, m, options, seed). Throws InfeasibleError when no
/// graph with the requested shape exists.
Graph generate_random_graph(std::size_t n, std::size_t m, const GeneratorOptions& options,
                            std::uint64_t seed);

/// |E| is a multiple of |V|.
bool is_bulbaceous(const Graph& g);
/// No two edges join the same unordered pair of endpoints.
bool is_flamboyous(const Graph& g);

/// Same node ids and same multiset of (source, target) pairs.
bool same_topology(const Graph& a, const Graph& b);

}  // namespace layerlab
