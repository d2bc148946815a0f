#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "formats_internal.hpp"
#include "layerlab/errors.hpp"
#include "text_cursor.hpp"

namespace layerlab::detail {

namespace pt = boost::property_tree;

Graph parse_graphml(std::string_view text) {
  pt::ptree doc;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(e.message(), e.line(), 0);
  }
  auto root = doc.get_child_optional("graphml");
  if (!root) throw ParseError("missing <graphml> root element");
  auto graph = root->get_child_optional("graph");
  if (!graph) throw ParseError("missing <graph> element");

  const bool directed = graph->get("<xmlattr>.edgedefault", "directed") != "undirected";
  NameTable names(/*allow_n_prefix=*/true);
  std::vector<std::pair<std::string, std::string>> raw_edges;
  for (const auto& [tag, child] : *graph) {
    if (tag == "node") {
      auto id = child.get_optional<std::string>("<xmlattr>.id");
      if (!id) throw ParseError("<node> without id attribute");
      if (!names.declare(*id)) throw GraphError(fmt::format("duplicate node id {}", *id));
    } else if (tag == "edge") {
      auto s = child.get_optional<std::string>("<xmlattr>.source");
      auto t = child.get_optional<std::string>("<xmlattr>.target");
      if (!s || !t) throw ParseError("<edge> needs source and target attributes");
      raw_edges.emplace_back(*s, *t);
    }
  }
  std::vector<NodeId> slot_to_id;
  std::vector<Node> nodes = names.resolve(slot_to_id);
  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  for (const auto& [s, t] : raw_edges) {
    if (!names.known(s) || !names.known(t)) {
      throw GraphError(fmt::format("edge {} -> {} references an undeclared node", s, t));
    }
    edges.push_back(Edge{slot_to_id[names.slot(s)], slot_to_id[names.slot(t)], std::nullopt});
  }
  return Graph(std::move(nodes), std::move(edges), directed);
}

std::string emit_graphml(const Graph& g, const EmitOptions& options) {
  if (!options.allow_lossy) {
    if (g.has_weights()) throw LossyEmissionError("GraphML subset cannot carry edge weights");
    if (g.has_labels()) throw LossyEmissionError("GraphML subset cannot carry node labels");
    if (g.has_timestamps()) throw LossyEmissionError("GraphML subset cannot carry timestamps");
  }
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  out += fmt::format("  <graph id=\"G\" edgedefault=\"{}\">\n",
                     g.directed() ? "directed" : "undirected");
  for (const Node& n : g.nodes()) out += fmt::format("    <node id=\"n{}\"/>\n", n.id);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    out += fmt::format("    <edge id=\"e{}\" source=\"n{}\" target=\"n{}\"/>\n", i, e.source,
                       e.target);
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

}  // namespace layerlab::detail
