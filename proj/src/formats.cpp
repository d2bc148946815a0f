#include <algorithm>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "formats_internal.hpp"
#include "layerlab/errors.hpp"
#include "layerlab/graph.hpp"
#include "text_cursor.hpp"

namespace layerlab {

namespace {

using detail::Cursor;

// "Graph G has {n} nodes, numbered from {lo} to {hi}. Graph G has {m} edges.\n
//  This is the list of edge connections:\n[a, b],[c, d]..."
Graph parse_edge_list(std::string_view text) {
  Cursor c(text);
  c.skip_space();
  c.expect("Graph G has");
  c.skip_space();
  const auto n = c.expect_number();
  c.skip_space();
  if (!c.consume("nodes") && !c.consume("node")) c.fail("expected 'nodes'");
  c.consume(",");
  c.skip_space();
  c.expect("numbered from");
  c.skip_space();
  const auto lo = c.expect_number();
  c.skip_space();
  c.expect("to");
  c.skip_space();
  const auto hi = c.expect_number();
  c.consume(".");
  if (hi < lo || hi - lo + 1 != n) {
    c.fail(fmt::format("node count {} does not match numbering {}..{}", n, lo, hi));
  }
  c.skip_space();
  c.expect("Graph G has");
  c.skip_space();
  const auto m = c.expect_number();
  c.skip_space();
  if (!c.consume("edges") && !c.consume("edge")) c.fail("expected 'edges'");
  c.consume(".");
  c.skip_space();
  c.expect("This is the list of edge connections:");

  std::vector<Edge> edges;
  while (true) {
    c.skip_space();
    if (c.at_end()) break;
    if (!edges.empty() && c.consume(",")) c.skip_space();
    if (c.at_end()) c.fail("expected '[' after ','");
    c.expect("[");
    c.skip_space();
    const auto a = c.expect_number();
    c.skip_space();
    c.expect(",");
    c.skip_space();
    const auto b = c.expect_number();
    c.skip_space();
    c.expect("]");
    if (a < lo || a > hi || b < lo || b > hi) {
      throw GraphError(fmt::format("edge [{}, {}] references a node outside {}..{}", a, b, lo, hi));
    }
    edges.push_back(Edge{static_cast<NodeId>(a), static_cast<NodeId>(b), std::nullopt});
  }
  if (edges.size() != m) {
    c.fail(fmt::format("declared {} edges but listed {}", m, edges.size()));
  }
  std::vector<Node> nodes;
  nodes.reserve(n);
  for (auto id = lo; id <= hi; ++id) nodes.push_back(Node{static_cast<NodeId>(id), {}, {}});
  return Graph(std::move(nodes), std::move(edges), true);
}

std::string emit_edge_list(const Graph& g, const EmitOptions& options) {
  if (g.empty()) throw InfeasibleError("edge-list text needs at least one node");
  if (!options.allow_lossy) {
    if (g.has_weights()) throw LossyEmissionError("edge-list text cannot carry edge weights");
    if (g.has_labels()) throw LossyEmissionError("edge-list text cannot carry node labels");
    if (g.has_timestamps()) throw LossyEmissionError("edge-list text cannot carry timestamps");
  }
  std::vector<NodeId> ids;
  ids.reserve(g.node_count());
  for (const Node& n : g.nodes()) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  const NodeId lo = ids.front();
  const NodeId hi = ids.back();
  if (static_cast<std::size_t>(hi - lo) + 1 != ids.size()) {
    throw InfeasibleError("edge-list text requires contiguous node ids");
  }
  std::string out = fmt::format(
      "Graph G has {} nodes, numbered from {} to {}. Graph G has {} edges.\n"
      "This is the list of edge connections:\n",
      g.node_count(), lo, hi, g.edge_count());
  out += detail::bracket_pairs(g.edges());
  return out;
}

std::string strip_trailing_commas(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (in_string) {
      out += ch;
      if (ch == '\\' && i + 1 < text.size()) {
        out += text[++i];
      } else if (ch == '"') {
        in_string = false;
      }
      continue;
    }
    if (ch == '"') {
      in_string = true;
    } else if (ch == ',') {
      std::size_t j = i + 1;
      while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && (text[j] == ']' || text[j] == '}')) {
        out += ' ';  // keeps byte offsets aligned for error positions
        continue;
      }
    }
    out += ch;
  }
  return out;
}

std::string json_id_name(const nlohmann::json& v, const char* what) {
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) {
    throw ParseError(fmt::format("{} must be a non-negative integer or a string", what));
  }
  if (v.is_string()) return v.get<std::string>();
  throw ParseError(fmt::format("{} must be a non-negative integer or a string", what));
}

Graph parse_json_graph(std::string_view text) {
  const std::string cleaned = strip_trailing_commas(text);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(cleaned);
  } catch (const nlohmann::json::parse_error& e) {
    Cursor c(cleaned);
    c.seek(e.byte == 0 ? 0 : e.byte - 1);
    c.fail(e.what());
  }
  if (!doc.is_object()) throw ParseError("graph JSON must be an object");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw ParseError("graph JSON needs a 'nodes' array");
  }
  const nlohmann::json empty = nlohmann::json::array();
  const nlohmann::json& jedges = doc.contains("edges") ? doc["edges"] : empty;
  if (!jedges.is_array()) throw ParseError("'edges' must be an array");

  detail::NameTable names;
  struct RawNode {
    std::optional<std::string> label;
    std::optional<Date> timestamp;
  };
  std::vector<RawNode> raw;
  for (const auto& jn : doc["nodes"]) {
    if (!jn.is_object() || !jn.contains("id")) throw ParseError("every node needs an 'id'");
    const std::string name = json_id_name(jn["id"], "node id");
    if (!names.declare(name)) throw GraphError(fmt::format("duplicate node id {}", name));
    RawNode r;
    if (jn.contains("label")) {
      if (!jn["label"].is_string()) throw ParseError("node label must be a string");
      r.label = jn["label"].get<std::string>();
    }
    if (jn.contains("timestamp")) {
      if (!jn["timestamp"].is_string()) throw ParseError("node timestamp must be a string");
      std::string ts = jn["timestamp"].get<std::string>();
      if (ts.size() > 10 && ts[10] == 'T') ts.resize(10);
      r.timestamp = parse_date(ts);
      if (!r.timestamp) throw ParseError(fmt::format("bad timestamp '{}'", ts));
    }
    raw.push_back(std::move(r));
  }
  struct RawEdge {
    std::string source, target;
    std::optional<double> weight;
  };
  std::vector<RawEdge> raw_edges;
  for (const auto& je : jedges) {
    if (!je.is_object() || !je.contains("source") || !je.contains("target")) {
      throw ParseError("every edge needs 'source' and 'target'");
    }
    RawEdge r{json_id_name(je["source"], "edge source"), json_id_name(je["target"], "edge target"),
              std::nullopt};
    for (const auto* endpoint : {&r.source, &r.target}) {
      if (!names.known(*endpoint)) {
        throw GraphError(fmt::format("edge endpoint {} is not a node", *endpoint));
      }
    }
    if (je.contains("weight")) {
      if (!je["weight"].is_number()) throw ParseError("edge weight must be a number");
      r.weight = je["weight"].get<double>();
    }
    raw_edges.push_back(std::move(r));
  }

  std::vector<NodeId> slot_to_id;
  std::vector<Node> nodes = names.resolve(slot_to_id);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (raw[i].label) nodes[i].label = raw[i].label;
    nodes[i].timestamp = raw[i].timestamp;
  }
  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  for (const auto& r : raw_edges) {
    edges.push_back(Edge{slot_to_id[names.slot(r.source)], slot_to_id[names.slot(r.target)],
                         r.weight});
  }
  bool directed = true;
  if (doc.contains("directed")) {
    if (!doc["directed"].is_boolean()) throw ParseError("'directed' must be a boolean");
    directed = doc["directed"].get<bool>();
  }
  return Graph(std::move(nodes), std::move(edges), directed);
}

std::string emit_json_graph(const Graph& g) {
  nlohmann::ordered_json doc;
  doc["directed"] = g.directed();
  auto& jnodes = doc["nodes"] = nlohmann::ordered_json::array();
  for (const Node& n : g.nodes()) {
    nlohmann::ordered_json jn;
    jn["id"] = n.id;
    if (n.label) jn["label"] = *n.label;
    if (n.timestamp) jn["timestamp"] = format_date(*n.timestamp);
    jnodes.push_back(std::move(jn));
  }
  auto& jedges = doc["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) {
    nlohmann::ordered_json je;
    je["source"] = e.source;
    je["target"] = e.target;
    if (e.weight) je["weight"] = *e.weight;
    jedges.push_back(std::move(je));
  }
  return doc.dump(2) + "\n";
}

}  // namespace

namespace detail {

std::string bracket_pairs(const std::vector<Edge>& edges) {
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out += ',';
    out += fmt::format("[{}, {}]", edges[i].source, edges[i].target);
  }
  return out;
}

}  // namespace detail

Graph parse_graph(std::string_view text, GraphFormat format) {
  switch (format) {
    case GraphFormat::EdgeListText: return parse_edge_list(text);
    case GraphFormat::JsonGraph: return parse_json_graph(text);
    case GraphFormat::GraphMLSubset: return detail::parse_graphml(text);
    case GraphFormat::DotSubset: return detail::parse_dot(text);
  }
  throw InfeasibleError("unknown graph format");
}

std::string emit_graph(const Graph& g, GraphFormat format, const EmitOptions& options) {
  switch (format) {
    case GraphFormat::EdgeListText: return emit_edge_list(g, options);
    case GraphFormat::JsonGraph: return emit_json_graph(g);
    case GraphFormat::GraphMLSubset: return detail::emit_graphml(g, options);
    case GraphFormat::DotSubset: return detail::emit_dot(g, options);
  }
  throw InfeasibleError("unknown graph format");
}

}  // namespace layerlab
