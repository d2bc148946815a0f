#include "layerlab/tasks.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include <fmt/format.h>

#include "layerlab/errors.hpp"

namespace layerlab {

namespace {

constexpr std::array<std::string_view, 10> kTaskNames = {
    "layer-assignment", "sort-layers",      "count-crossings", "edge-length",
    "graph-generation", "format-conversion", "property-check", "graph-from-scene",
    "scene-from-graph", "svg-from-dot",
};

constexpr std::array<std::string_view, 24> kPeople = {
    "Alice",  "Bob",   "Claire", "Daniel", "Ed",    "Fiona", "George", "Hannah",
    "Ivan",   "Julia", "Kevin",  "Laura",  "Marco", "Nina",  "Oscar",  "Paula",
    "Quentin", "Rita", "Sam",    "Tina",   "Umar",  "Vera",  "Walter", "Yara",
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(TaskKind task) { return kTaskNames[static_cast<std::size_t>(task)]; }

TaskKind parse_task_kind(std::string_view name) {
  const std::string key = lower(name);
  for (std::size_t i = 0; i < kTaskNames.size(); ++i) {
    if (kTaskNames[i] == key) return static_cast<TaskKind>(i);
  }
  throw ParseError(fmt::format("unknown task '{}'", name));
}

bool is_numeric(TaskKind task) {
  return task == TaskKind::CountCrossings || task == TaskKind::EdgeLength;
}

Strategy Strategy::icl(int k) {
  if (k < 3 || k > 5) throw InfeasibleError(fmt::format("ICL needs 3 to 5 examples, got {}", k));
  return {Kind::Icl, k};
}

std::string to_string(const Strategy& s) {
  switch (s.kind) {
    case Strategy::Kind::Standard: return "standard";
    case Strategy::Kind::Steps: return "steps";
    case Strategy::Kind::Icl: return fmt::format("icl{}", s.k);
  }
  return "standard";
}

Strategy parse_strategy(std::string_view name) {
  const std::string key = lower(name);
  if (key == "standard") return Strategy::standard();
  if (key == "steps") return Strategy::steps();
  if (key.size() == 4 && key.starts_with("icl") && std::isdigit(static_cast<unsigned char>(key[3]))) {
    return Strategy::icl(key[3] - '0');
  }
  throw ParseError(fmt::format("unknown strategy '{}'", name));
}

TaskKind TaskInstance::kind() const { return static_cast<TaskKind>(payload.index()); }

TaskInstance make_layer_assignment(std::string id, const Graph& g, NodeId source) {
  if (!g.contains(source)) throw GraphError(fmt::format("source {} is not in the graph", source));
  return {std::move(id), LayerAssignmentTask{g, source}};
}

TaskInstance make_sort_layers(std::string id, const Graph& g, NodeId source) {
  const BfsLayering bfs = layered_bfs(g, source);
  return {std::move(id), SortLayersTask{remove_same_layer_edges(g, bfs.ranks), bfs.ordering}};
}

std::vector<TaskInstance> make_count_crossings(const std::string& id, const Graph& g,
                                               NodeId source) {
  const BfsLayering bfs = layered_bfs(g, source);
  const Graph pruned = remove_same_layer_edges(g, bfs.ranks);
  std::vector<TaskInstance> out;
  for (std::size_t gap = 0; gap + 1 < bfs.ordering.layers.size(); ++gap) {
    out.push_back({fmt::format("{}-gap{}", id, gap),
                   CountCrossingsTask{bfs.ordering.layers[gap], bfs.ordering.layers[gap + 1],
                                      gap_edges(bfs.ordering, pruned, gap)}});
  }
  return out;
}

TaskInstance make_edge_length(std::string id, const Graph& g, NodeId source, EdgeLayering mode,
                              int num_layers, std::uint64_t seed) {
  if (mode == EdgeLayering::Bfs) {
    const BfsLayering bfs = layered_bfs(g, source);
    return {std::move(id), EdgeLengthTask{remove_same_layer_edges(g, bfs.ranks), bfs.ordering}};
  }
  LayeredOrdering layers = LayeredOrdering::from_ranks(random_layering(g, num_layers, seed));
  layers.layers.resize(static_cast<std::size_t>(num_layers));
  return {std::move(id), EdgeLengthTask{g, std::move(layers)}};
}

TaskInstance make_graph_generation(std::string id, std::size_t nodes, std::size_t edges,
                                   std::optional<DateRange> timestamps,
                                   std::optional<double> min_weight) {
  if (nodes == 0) throw InfeasibleError("a generated graph needs at least one node");
  return {std::move(id), GraphGenerationTask{nodes, edges, timestamps, min_weight}};
}

TaskInstance make_format_conversion(std::string id, const Graph& g, GraphFormat from,
                                    GraphFormat to) {
  return {std::move(id), FormatConversionTask{g, from, to}};
}

TaskInstance make_property_check(std::string id, const Graph& g, GraphProperty property) {
  if (g.empty()) throw InfeasibleError("property checks need at least one node");
  return {std::move(id), PropertyCheckTask{g, property}};
}

TaskInstance make_graph_from_scene(std::string id, const Graph& g) {
  Graph people = name_people(g);
  std::string scene = write_scene(people);
  return {std::move(id), GraphFromSceneTask{std::move(scene), std::move(people)}};
}

TaskInstance make_scene_from_graph(std::string id, const Graph& g) {
  return {std::move(id), SceneFromGraphTask{name_people(g)}};
}

TaskInstance make_svg_from_dot(std::string id, const Graph& g) {
  return {std::move(id), SvgFromDotTask{g}};
}

Graph name_people(const Graph& g) {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::set<std::string> used;
  for (const Node& n : g.nodes()) {
    if (n.label) used.insert(*n.label);
  }
  std::size_t next = 0;
  // Nodes are renumbered 0..n-1 so the DOT emitter can use names directly.
  std::map<NodeId, NodeId> renumber;
  for (const Node& n : g.nodes()) {
    Node out{static_cast<NodeId>(nodes.size()), n.label, std::nullopt};
    while (!out.label) {
      std::string candidate = next < kPeople.size()
                                  ? std::string(kPeople[next])
                                  : fmt::format("{}{}", kPeople[next % kPeople.size()],
                                                next / kPeople.size() + 1);
      ++next;
      if (used.insert(candidate).second) out.label = candidate;
    }
    renumber[n.id] = out.id;
    nodes.push_back(std::move(out));
  }
  for (const Edge& e : g.edges()) edges.push_back({renumber[e.source], renumber[e.target], e.weight});
  return Graph(std::move(nodes), std::move(edges), false);
}

std::string write_scene(const Graph& people) {
  static constexpr std::array<std::string_view, 5> kMeetings = {
      "{} and {} had a meeting about the quarterly report.",
      "{} chatted with {} at the coffee machine.",
      "{} and {} worked together on a presentation.",
      "{} asked {} for help with a bug.",
      "{} had lunch with {}.",
  };
  std::vector<std::string> sentences;
  std::set<NodeId> busy;
  for (std::size_t i = 0; i < people.edges().size(); ++i) {
    const Edge& e = people.edges()[i];
    busy.insert(e.source);
    busy.insert(e.target);
    if (e.source == e.target) {
      sentences.push_back(fmt::format("{} spent some time talking to themselves.",
                                      people.name(e.source)));
      continue;
    }
    sentences.push_back(fmt::format(fmt::runtime(kMeetings[i % kMeetings.size()]),
                                    people.name(e.source), people.name(e.target)));
  }
  for (const Node& n : people.nodes()) {
    if (!busy.count(n.id)) {
      sentences.push_back(fmt::format("{} worked alone all day.", people.name(n.id)));
    }
  }
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

}  // namespace layerlab
