#include "layerlab/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "layerlab/errors.hpp"

namespace layerlab {

ParseError::ParseError(std::string message, std::size_t line, std::size_t column)
    : Error(line == 0 ? message
                      : fmt::format("line {}, column {}: {}", line, column, message)),
      message_(std::move(message)),
      line_(line),
      column_(column) {}

Graph::Graph(std::vector<Node> nodes, std::vector<Edge> edges, bool directed)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), directed_(directed) {
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].id, i).second) {
      throw GraphError(fmt::format("duplicate node id {}", nodes_[i].id));
    }
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!contains(e.source) || !contains(e.target)) {
      throw GraphError(fmt::format("edge {} ({}, {}) has an endpoint that is not a node", i,
                                   e.source, e.target));
    }
    if (e.weight && (!std::isfinite(*e.weight) || *e.weight <= 0.0)) {
      throw GraphError(fmt::format("edge {} ({}, {}) has non-positive weight {}", i, e.source,
                                   e.target, *e.weight));
    }
  }
}

Graph Graph::from_pairs(std::size_t node_count,
                        const std::vector<std::pair<NodeId, NodeId>>& pairs, bool directed) {
  std::vector<Node> nodes(node_count);
  for (std::size_t i = 0; i < node_count; ++i) nodes[i].id = static_cast<NodeId>(i);
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [s, t] : pairs) edges.push_back(Edge{s, t, std::nullopt});
  return Graph(std::move(nodes), std::move(edges), directed);
}

std::size_t Graph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw GraphError(fmt::format("unknown node {}", id));
  return it->second;
}

std::string Graph::name(NodeId id) const {
  const Node& n = node(id);
  return n.label ? *n.label : std::to_string(id);
}

bool Graph::has_weights() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight.has_value(); });
}

bool Graph::has_labels() const {
  return std::any_of(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.label.has_value(); });
}

bool Graph::has_timestamps() const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [](const Node& n) { return n.timestamp.has_value(); });
}

Graph Graph::with_edges(std::vector<Edge> edges) const {
  return Graph(nodes_, std::move(edges), directed_);
}

std::string_view to_string(GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphMLSubset: return "graphml";
    case GraphFormat::EdgeListText: return "edgelist";
    case GraphFormat::JsonGraph: return "json";
    case GraphFormat::DotSubset: return "dot";
  }
  return "unknown";
}

GraphFormat parse_graph_format(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "graphml") return GraphFormat::GraphMLSubset;
  if (lower == "edgelist" || lower == "txt" || lower == "text") return GraphFormat::EdgeListText;
  if (lower == "json") return GraphFormat::JsonGraph;
  if (lower == "dot" || lower == "gv") return GraphFormat::DotSubset;
  throw InfeasibleError(fmt::format("unknown graph format '{}'", name));
}

std::optional<GraphFormat> format_from_extension(std::string_view path) {
  auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  try {
    return parse_graph_format(path.substr(dot + 1));
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

std::string format_date(const Date& date) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  auto digits = [](std::string_view s, auto& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
  };
  if (!digits(text.substr(0, 4), y) || !digits(text.substr(5, 2), m) ||
      !digits(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

bool is_bulbaceous(const Graph& g) {
  if (g.node_count() == 0) throw InfeasibleError("bulbaceous check needs at least one node");
  return g.edge_count() % g.node_count() == 0;
}

bool is_flamboyous(const Graph& g) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(g.edge_count());
  for (const Edge& e : g.edges()) pairs.emplace_back(std::minmax(e.source, e.target));
  std::sort(pairs.begin(), pairs.end());
  return std::adjacent_find(pairs.begin(), pairs.end()) == pairs.end();
}

bool same_topology(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  for (const Node& n : a.nodes()) {
    if (!b.contains(n.id)) return false;
  }
  std::map<std::pair<NodeId, NodeId>, long> counts;
  for (const Edge& e : a.edges()) ++counts[{e.source, e.target}];
  for (const Edge& e : b.edges()) {
    if (--counts[{e.source, e.target}] < 0) return false;
  }
  return true;
}

}  // namespace layerlab
