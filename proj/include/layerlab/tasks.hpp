#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "layerlab/graph.hpp"
#include "layerlab/layout.hpp"

namespace layerlab {

enum class TaskKind {
  LayerAssignment,
  SortLayers,
  CountCrossings,
  EdgeLength,
  GraphGeneration,
  FormatConversion,
  PropertyCheck,
  GraphFromScene,
  SceneFromGraph,
  SvgFromDot,
};

inline constexpr TaskKind kAllTasks[] = {
    TaskKind::LayerAssignment, TaskKind::SortLayers,       TaskKind::CountCrossings,
    TaskKind::EdgeLength,      TaskKind::GraphGeneration,  TaskKind::FormatConversion,
    TaskKind::PropertyCheck,   TaskKind::GraphFromScene,   TaskKind::SceneFromGraph,
    TaskKind::SvgFromDot,
};

/// "layer-assignment", "sort-layers", "count-crossings", ...
std::string_view to_string(TaskKind task);
TaskKind parse_task_kind(std::string_view name);
/// Tasks whose answer is a single integer.
bool is_numeric(TaskKind task);

struct Strategy {
  enum class Kind { Standard, Steps, Icl };
  Kind kind = Kind::Standard;
  int k = 0;  // ICL only, 3..5

  static Strategy standard() { return {Kind::Standard, 0}; }
  static Strategy steps() { return {Kind::Steps, 0}; }
  /// Throws InfeasibleError unless 3 <= k <= 5.
  static Strategy icl(int k);

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// "standard", "steps", "icl3" .. "icl5".
std::string to_string(const Strategy& s);
Strategy parse_strategy(std::string_view name);

struct LayerAssignmentTask {
  Graph graph;
  NodeId source = 0;
};

/// `graph` already has same-layer edges removed.
struct SortLayersTask {
  Graph graph;
  LayeredOrdering input;
};

/// One gap of a layered drawing; edges are oriented (a, b).
struct CountCrossingsTask {
  std::vector<NodeId> a;
  std::vector<NodeId> b;
  std::vector<Edge> edges;
};

struct EdgeLengthTask {
  Graph graph;
  LayeredOrdering layers;
};

struct GraphGenerationTask {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::optional<DateRange> timestamps;
  std::optional<double> min_weight;
};

struct FormatConversionTask {
  Graph graph;
  GraphFormat from = GraphFormat::GraphMLSubset;
  GraphFormat to = GraphFormat::EdgeListText;
};

enum class GraphProperty { Bulbaceous, Flamboyous };

struct PropertyCheckTask {
  Graph graph;
  GraphProperty property = GraphProperty::Bulbaceous;
};

/// `truth` carries people as node labels.
struct GraphFromSceneTask {
  std::string scene;
  Graph truth;
};

struct SceneFromGraphTask {
  Graph graph;
};

struct SvgFromDotTask {
  Graph graph;
};

using TaskPayload =
    std::variant<LayerAssignmentTask, SortLayersTask, CountCrossingsTask, EdgeLengthTask,
                 GraphGenerationTask, FormatConversionTask, PropertyCheckTask, GraphFromSceneTask,
                 SceneFromGraphTask, SvgFromDotTask>;

struct TaskInstance {
  std::string id;
  TaskPayload payload;

  TaskKind kind() const;
};

TaskInstance make_layer_assignment(std::string id, const Graph& g, NodeId source);
/// BFS from `source`, same-layer edges removed, layers in discovery order.
TaskInstance make_sort_layers(std::string id, const Graph& g, NodeId source);
/// One instance per consecutive layer pair of the BFS layering, named
/// "<id>-gap<i>". The count is always layer_count - 1.
std::vector<TaskInstance> make_count_crossings(const std::string& id, const Graph& g,
                                               NodeId source);

enum class EdgeLayering { Bfs, Random };
/// Bfs: pruned graph on its BFS layering. Random: full graph on a
/// `num_layers`-layer random layering, empty layers kept.
TaskInstance make_edge_length(std::string id, const Graph& g, NodeId source, EdgeLayering mode,
                              int num_layers = 6, std::uint64_t seed = 0);
TaskInstance make_graph_generation(std::string id, std::size_t nodes, std::size_t edges,
                                   std::optional<DateRange> timestamps = {},
                                   std::optional<double> min_weight = {});
TaskInstance make_format_conversion(std::string id, const Graph& g, GraphFormat from,
                                    GraphFormat to);
TaskInstance make_property_check(std::string id, const Graph& g, GraphProperty property);
/// Names the nodes after people and writes one interaction per edge.
TaskInstance make_graph_from_scene(std::string id, const Graph& g);
TaskInstance make_scene_from_graph(std::string id, const Graph& g);
TaskInstance make_svg_from_dot(std::string id, const Graph& g);

/// Copy of `g` (made undirected) whose unlabelled nodes get first names.
Graph name_people(const Graph& g);
/// One sentence per edge naming both endpoints; isolated people get their own.
std::string write_scene(const Graph& people);

}  // namespace layerlab
