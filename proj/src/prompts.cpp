#include "layerlab/prompts.hpp"

#include <random>
#include <set>

#include <fmt/format.h>

#include "layerlab/answers.hpp"
#include "layerlab/errors.hpp"

namespace layerlab {

namespace {

std::string join_ids(const std::vector<NodeId>& ids) {
  return fmt::format("[{}]", fmt::join(ids, ", "));
}

std::string tuple(NodeId a, NodeId b) { return fmt::format("({}, {})", a, b); }

std::string tuple_list(const std::vector<Edge>& edges) {
  std::vector<std::string> parts;
  for (const Edge& e : edges) parts.push_back(tuple(e.source, e.target));
  return fmt::format("[{}]", fmt::join(parts, ", "));
}

// "Layer i: [..]" lines; `trail` is appended to every line.
std::string layer_lines(const LayeredOrdering& ordering, std::string_view trail) {
  std::string out;
  for (std::size_t i = 0; i < ordering.layers.size(); ++i) {
    if (i) out += '\n';
    out += fmt::format("Layer {}: {}{}", i, join_ids(ordering.layers[i]), trail);
  }
  return out;
}

std::string edge_list_text(const Graph& g) {
  return emit_graph(g, GraphFormat::EdgeListText, {.allow_lossy = true});
}

std::string dot_text(const Graph& g) {
  return emit_graph(g, GraphFormat::DotSubset, {.allow_lossy = true});
}

// ---------------------------------------------------------------- layers

std::string rank_instruction(NodeId s, std::string_view trail) {
  return fmt::format(
      "Perform a rank assignment on the graph. Use node {0} as a source for the graph. Each node "
      "must be assigned to a rank that is equal to the shortest path between that node and the "
      "source. Thus, node {0} will be assigned to rank 0, and the neighbors of node {0} will be "
      "assigned to rank 1.{1}\n"
      "Write no explanations, only respond with the id of each node and the rank it has been "
      "assigned to in a format <id> - <rank>.",
      s, trail);
}

std::string layer_assignment_steps(const LayerAssignmentTask& t) {
  std::string out = fmt::format(
      "You are a powerful algorithm for graph drawing. Your job is to answer questions regarding "
      "graphs. This is a list of directed edges in a graph::\n\n"
      "edge_list: {0}\n\n"
      "Start from node {1}. Node {1} belongs to layer 0.\n\n"
      "Find all the neighbors of node {1}. Assign all the neighbors of node {1} to layer number 1.\n"
      "Then write the list of nodes belonging to layer 1 in a code block, one node per line, "
      "formatted as node: layer.\n\n",
      tuple_list(t.graph.edges()), t.source);
  for (int layer = 1; layer <= 4; ++layer) {
    out += fmt::format(
        "Find all neighbors of the nodes in layer {} that do not already belong to a layer. "
        "Assign to them depth {}. \n"
        "Then write the list of nodes belonging to layer {}{} in a code block, one node per line, "
        "formatted as node: layer.\n\n",
        layer, layer + 1, layer + 1, layer == 1 ? "," : "");
  }
  out +=
      "Repeat the process, incrementing the layer, until there are no more nodes that are not "
      "assigned to any layer\n"
      "Write the final result in a code block, one node per line, formatted as node: layer.";
  return out;
}

// ---------------------------------------------------------------- sorting

constexpr std::string_view kSortProcedure =
    "Start from layer 0. \n"
    "Consider every node in layer 0, and for each node consider its neighbors in the next layer. \n"
    "For each node in layer 0, calculate the positions of the neighbors in the next layer. \n"
    "Then, sort the nodes in layer 0 based on the median position of their neighbors.\n"
    "If a number is NaN, then it is equal to 0.\n"
    "If a node has no neighbors, assign an associated median of 0.\n";

constexpr std::string_view kSortFinal =
    "Finally, I want you to write the layers and the nodes in them once more, but the nodes in the "
    "layers have to be sorted according to their associated median value.\n"
    "Like this:\n"
    "Layer 0: [<sorted nodes in layer 0>]\n"
    "If node A has an associated median value that is less than the associated median value of "
    "node B, then node A must come before node B.";

std::string sort_preamble(const SortLayersTask& t) {
  return fmt::format(
      "This is a list of directed edges in a layered graph.\n{}\n\n"
      "This is the description of what nodes are contained in what layer:  {}\n\n",
      tuple_list(t.graph.edges()), layer_lines(t.input, " "));
}

std::string sort_standard(const SortLayersTask& t) {
  return sort_preamble(t) + "Write no code and no explanations.\n\n" + std::string(kSortProcedure) +
         "\nRepeat the process for every layer.\n\n" + std::string(kSortFinal) + " ";
}

std::string sort_steps(const SortLayersTask& t) {
  return sort_preamble(t) +
         "Start from layer 0. \n"
         "List every node in layer 0, and for each node list its neighbors in the next layer. \n"
         "Like this: \n"
         "Layer 0: [<node1>, <node2>, ...]\n"
         "Neighbors of <node1>: [<neighbor1>, <neighbor2>, ...]\n\n"
         "Then, for every one of the neighbors, write their index in their layer. So if node 6 "
         "belongs to layer 2 and is in the fourth position in layer 2, its index is 3.\n"
         "Like this:\n"
         "Index of <neighbor1>: <value>\n"
         "And under each set of indices write the median of the indices.\n\n"
         "Now I want you to start again from layer 0, and this time I want you to list the nodes "
         "in every layer and their associated medians.\n"
         "Like this:\n"
         "Layer 0:\n"
         "<node 0> -> <median of the neighbors of node 0>\n\n"
         "If a number is NaN, then it is equal to 0.\n"
         "If a node has no neighbors, assign an associated median of 0.\n\n"
         "Finally, I want you to write the layers and the nodes in them once more, but the nodes "
         "in the layers have to be sorted according to their associated median value. \n"
         "Like this:\n"
         "Layer 0: [<sorted nodes in layer 0>]\n"
         "If node A has an associated median value that is less than the associated median value "
         "of node B, then node A must come before node B. \n"
         "This time, write no additional information other than the layers and the sorted nodes.";
}

std::string sort_icl_header() {
  return "We want to reduce edge crossings on a layered graph drawing.\n"
         "You are given a  list of directed edges in a layered graph, and a mapping of which nodes "
         "are contained in which layer.\n" +
         std::string(kSortProcedure) + "Repeat the process for every layer.\n" +
         std::string(kSortFinal);
}

std::string sort_icl_input(const SortLayersTask& t) {
  return fmt::format("Directed edges:\n{}\nLayer node mapping:\n{}", tuple_list(t.graph.edges()),
                     layer_lines(t.input, ""));
}

// ---------------------------------------------------------------- crossings

std::string crossing_arrays(const CountCrossingsTask& t) {
  return fmt::format("A: {}\nB: {}", join_ids(t.a), join_ids(t.b));
}

std::string crossing_standard(const CountCrossingsTask& t) {
  return fmt::format(
      "Given the following arrays: \n{}\n\n"
      "And the following list of tuples:\n"
      "Tuples: {}\n\n"
      "Where for each tuple the first element of comes from array A, and the second element comes "
      "from array B.\n\n"
      "Assuming this is a bipartite graph, count the edge crossings. Two edges that share a source "
      "or a target can not cross. Two edges cross if the order of their sources is opposite to the "
      "order of their targets.\n\n"
      "Exclude all edge crossings where edges have the same source or the same target.\n\n"
      "Write no explanations and no code. Return the pairs of edges that cross, one per line. There "
      "might be no edge crossings - in that case, return an empty list.\n",
      crossing_arrays(t), tuple_list(t.edges));
}

std::string crossing_steps(const CountCrossingsTask& t) {
  return fmt::format(
      "You are a very advanced program that can help me with counting edge crossings in a "
      "bipartite graph. Write the answer to the following question.\n\n"
      "Given the following arrays: \n{}\n\n"
      "And the following list of edges:\n"
      "Tuples: {}\n\n"
      "Where for each edges the first element comes from array A, and the second element comes "
      "from array B.\n\n"
      "VERY IMPORTANT: If there is a single edge, write 0 and stop writing!. If array A has length "
      "1, write 0 and stop writing!. If array B has length 1, write 0 and stop writing!\n\n"
      "Otherwise keep going and consider all the combinations of edge pairs. \n\n"
      "Then, exclude all the pairs that have the same first element. Write the list.\n"
      "Then, exclude all the pairs that have the same second element. Write the list again.\n\n"
      "Now for every pair of edges left, consider the first one. Say that s1 is the index of its "
      "first element in A, and t1 is the index of its second element in B. Then consider the "
      "second edge. Say that s2 is the index of its first element in A, and t2 is the index of its "
      "second element in B.\n"
      "Write down s1, t1, s2 and t2 for every pair, like this:\n"
      "<pair> => s1 = <value>, t1 = <value>, s2 = <value>, t2 = <value>\n\n"
      "Now exclude all the pairs for which s1 > s2 and t1 < t2. Write the list again.\n\n"
      "Now exclude all the pairs for which s1 < s2 and t1 > t2. Write the list again.\n\n"
      "Write the number of edges left as a number.",
      crossing_arrays(t), tuple_list(t.edges));
}

std::string crossing_icl_header() {
  return "You are a very advanced program that can help me with counting edge crossings in a "
         "bipartite graph.\n"
         "I will provide you with the arrays of nodes of layers A and B and a list of edges as "
         "tuples.\n"
         "For each edge the first element comes from array A, and the second element comes from "
         "array B.\n\n"
         "Assuming this is a bipartite graph, count the edge crossings. \n"
         "Two edges that share a source or a target can not cross. \n"
         "Two edges cross if the order of their sources is opposite to the order of their "
         "targets.\n\n"
         "Exclude all crossings where edges have the same source or the same target.\n\n"
         "Write no explanations and no code. Return the number of edges that cross. There might "
         "be no edge crossings - in that case, return 0.";
}

std::string crossing_icl_input(const CountCrossingsTask& t) {
  return fmt::format("Layer arrays:\n{}\nEdge tuples:\nTuples: {}", crossing_arrays(t),
                     tuple_list(t.edges));
}

// ---------------------------------------------------------------- edge length

std::string length_preamble(const EdgeLengthTask& t) {
  return fmt::format(
      "The following is the description of a layered graph. \n"
      "A layered graph is a graph where each node is contained in a single layer.\n"
      "The following is the list of directed edges, formatted as [(<source_id>, <target_id>)].\n\n"
      "edge_list: {}\n\n"
      "The second is a mapping of layers to the nodes contained within. Every array is a different "
      "layer, and the numbers in every array indicate the nodes in that layer.\n\n"
      "{}\n\n"
      "Count the total edge length. The edge length of each edge e is always equal to the absolute "
      "value of the number of the layer the target is contained in, minus the number of the layer "
      "the source is contained in. The edge length can't be negative.\n\n",
      tuple_list(t.graph.edges()), layer_lines(t.layers, " "));
}

std::string length_icl_header() {
  return "A layered graph is a graph where each node is contained in a single layer.\n"
         "A layered graph is described by list of directed edges, formatted as [(<source_id>, "
         "<target_id>)], and a mapping of layers to the nodes contained within.\n"
         "Every array in the mapping is a different layer, and the numbers in every array "
         "indicate the nodes in that layer.\n\n"
         "Count the total edge length. \n"
         "The edge length of each edge e is always equal to the absolute value of the number of "
         "the layer the target is contained in, minus the number of the layer the source is "
         "contained in.\n"
         "The edge length can't be negative.\n\n"
         "Write no explanations and no code. Return the total sum of the lengths.";
}

std::string length_icl_input(const EdgeLengthTask& t) {
  return fmt::format(
      "List of edges formatted as [<source_id>, <target_id>]:\nedges = {}\n"
      "Mapping of layers to nodes:\nranks = {}",
      tuple_list(t.graph.edges()), layer_lines(t.layers, ""));
}

// ---------------------------------------------------------------- utility tasks

constexpr std::string_view kMonths[] = {"January", "February", "March",     "April",
                                        "May",     "June",     "July",      "August",
                                        "September", "October", "November", "December"};

std::string spoken_date(const Date& d) {
  return fmt::format("{} {}, {}", kMonths[static_cast<unsigned>(d.month()) - 1],
                     static_cast<unsigned>(d.day()), static_cast<int>(d.year()));
}

std::string generation_request(const GraphGenerationTask& t) {
  std::string out = fmt::format("I want the graph to have {} nodes and {} edges.", t.nodes, t.edges);
  if (t.timestamps) {
    out += fmt::format(" I want every node to have a timestamp from {} to {}.",
                       spoken_date(t.timestamps->first), spoken_date(t.timestamps->last));
  }
  if (t.min_weight) {
    out += fmt::format(
        " I want every edge to have a weight associated with it, which must be higher than {}.",
        *t.min_weight);
  }
  return out;
}

std::string format_name(GraphFormat f) {
  switch (f) {
    case GraphFormat::GraphMLSubset: return "GraphML";
    case GraphFormat::EdgeListText: return "edge list";
    case GraphFormat::JsonGraph: return "JSON";
    case GraphFormat::DotSubset: return "DOT";
  }
  return "";
}

std::string conversion_target_hint(GraphFormat to) {
  switch (to) {
    case GraphFormat::EdgeListText:
      return " The edge list format looks like this:\n"
             "Graph G has <n> nodes, numbered from <first id> to <last id>. Graph G has <m> "
             "edges.\nThis is the list of edge connections:\n[<source node id>, <target node id>],"
             "[<source node id>, <target node id>]";
    case GraphFormat::JsonGraph:
      return " The JSON object must have a \"nodes\" array of {\"id\": <id>} objects and an "
             "\"edges\" array of {\"source\": <id>, \"target\": <id>} objects.";
    default: return "";
  }
}

std::string property_query(const PropertyCheckTask& t) {
  const Graph& g = t.graph;
  if (t.property == GraphProperty::Bulbaceous) {
    return fmt::format(
        "A graph is bulbaceous if its number of edges is a multiple of its number of nodes. \n \n"
        "Graph G has {} nodes and {} edges.\n \n"
        "Is graph G bulbaceous?",
        g.node_count(), g.edge_count());
  }
  std::vector<std::string> ids;
  for (const Node& n : g.nodes()) ids.push_back(g.name(n.id));
  std::string listed = ids.back();
  if (ids.size() > 1) {
    ids.pop_back();
    listed = fmt::format("{} and {}", fmt::join(ids, ", "), listed);
  }
  std::vector<std::string> edges;
  for (const Edge& e : g.edges()) edges.push_back(fmt::format("({}, {})", g.name(e.source), g.name(e.target)));
  return fmt::format(
      "A graph is flamboyous if there are no two edges connecting the same set of nodes. \n \n"
      "Graph G has {} nodes ({}) and {} edges.\n"
      "The edges of G are: {}\n \n"
      "Is graph G flamboyous?",
      g.node_count(), listed, g.edge_count(), fmt::join(edges, " "));
}

constexpr std::string_view kSceneToGraph =
    "I am going to give you a description of a short scene, and I would like you to provide me "
    "with a DOT graph representation in a code block where each person in the scene is a node, and "
    "whenever two characters interact there is an edge between them:\n\n";

constexpr std::string_view kGraphToScene =
    "I am going to give you a DOT graph format where each node is a person, and each edge "
    "represents that these people interacted in some way, such as chatting, having a meeting, "
    "working together, or something. I want you to write a short description of a day at the "
    "office that reproduces the topology of the graph:\n\n";

constexpr std::string_view kDotToSvg =
    "I am going to give you a DOT graph. Translate it into an SVG representation where every node "
    "is a circle labelled with its name and every edge is a line between the two circles.";

// Standard-form text of a utility task, used both as the query and as the
// input part of ICL examples.
std::string utility_query(const TaskInstance& inst, bool steps) {
  return std::visit(
      [&](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, GraphGenerationTask>) {
          if (steps) {
            return "Generate a graph for me. " + generation_request(t) +
                   " First, list the nodes with their attributes. Then, list the edges with their "
                   "attributes. Finally, write the json representation of the graph in a code "
                   "block.";
          }
          return "Generate a graph for me. Write no explanations, exclusively write the json "
                 "representation of the graph. " +
                 generation_request(t);
        } else if constexpr (std::is_same_v<T, FormatConversionTask>) {
          std::string head = fmt::format("Convert the following graph from {} format to {} format.",
                                         format_name(t.from), format_name(t.to)) +
                             conversion_target_hint(t.to);
          const std::string body =
              emit_graph(t.graph, t.from, {.allow_lossy = true});
          if (steps) {
            return head + "\n\n" + body +
                   "\n\nFirst, list the nodes of the graph. Then, list its edges. Finally, write "
                   "the converted graph in a code block.";
          }
          return head + " Write no explanations, exclusively write the converted graph in a code "
                        "block.\n\n" +
                 body;
        } else if constexpr (std::is_same_v<T, PropertyCheckTask>) {
          if (steps) {
            return property_query(t) +
                   "\n \nThink step by step. Then write the final answer, Yes. or No., in a "
                   "separate line at the end.";
          }
          return property_query(t) + "\n \nWrite no explanations.";
        } else if constexpr (std::is_same_v<T, GraphFromSceneTask>) {
          std::string out = std::string(kSceneToGraph) + t.scene;
          if (steps) {
            out +=
                "\n\nFirst, list every person in the scene. Then, list every pair of people who "
                "interact. Finally, write the DOT graph in a code block.";
          }
          return out;
        } else if constexpr (std::is_same_v<T, SceneFromGraphTask>) {
          std::string out = std::string(kGraphToScene) + dot_text(t.graph);
          if (steps) {
            out +=
                "\nFirst, list every pair of people joined by an edge. Then, write the "
                "description so that every such pair interacts within a single sentence.";
          }
          return out;
        } else if constexpr (std::is_same_v<T, SvgFromDotTask>) {
          if (steps) {
            return std::string(kDotToSvg) +
                   " First, choose a position for every node so that no node lies on an edge it "
                   "does not belong to. Then, write the SVG code in a code block.\n\n" +
                   dot_text(t.graph);
          }
          return std::string(kDotToSvg) +
                 " Write no explanations, exclusively write the SVG code in a code block.\n\n" +
                 dot_text(t.graph);
        } else {
          throw InfeasibleError("not a utility task");
        }
      },
      inst.payload);
}

// ---------------------------------------------------------------- dispatch

std::string standard_text(const TaskInstance& inst) {
  return std::visit(
      [&](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LayerAssignmentTask>) {
          return edge_list_text(t.graph) + "\n" + rank_instruction(t.source, "");
        } else if constexpr (std::is_same_v<T, SortLayersTask>) {
          return sort_standard(t);
        } else if constexpr (std::is_same_v<T, CountCrossingsTask>) {
          return crossing_standard(t);
        } else if constexpr (std::is_same_v<T, EdgeLengthTask>) {
          return length_preamble(t) +
                 "Write no explanations and no code. Return the total sum of the lengths.";
        } else {
          return utility_query(inst, false);
        }
      },
      inst.payload);
}

std::string steps_text(const TaskInstance& inst) {
  return std::visit(
      [&](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LayerAssignmentTask>) {
          return layer_assignment_steps(t);
        } else if constexpr (std::is_same_v<T, SortLayersTask>) {
          return sort_steps(t);
        } else if constexpr (std::is_same_v<T, CountCrossingsTask>) {
          return crossing_steps(t);
        } else if constexpr (std::is_same_v<T, EdgeLengthTask>) {
          return length_preamble(t) +
                 "First, for each edge, write the layer of the source node and the layer of the "
                 "target node.\n"
                 "Then, write each edge and its associated length.\n"
                 "In the end, write the total sum of the lengths.\n"
                 "Write the final sum in a separate line at the end.";
        } else {
          return utility_query(inst, true);
        }
      },
      inst.payload);
}

std::string icl_text(const TaskInstance& inst, const std::vector<TaskInstance>& examples) {
  // Example answers use the ICL answer format (a bare count for crossings).
  const Strategy style = Strategy::icl(3);
  std::string out;
  switch (inst.kind()) {
    case TaskKind::LayerAssignment: {
      const auto& q = std::get<LayerAssignmentTask>(inst.payload);
      out = rank_instruction(q.source, " ") + "\n\n";
      for (const auto& ex : examples) {
        out += "Input:\n" + edge_list_text(std::get<LayerAssignmentTask>(ex.payload).graph) +
               "\nAnswer:\n" + oracle_answer(ex, style) + "\n\n";
      }
      return out + "Input:\n" + edge_list_text(q.graph) + "\nAnswer:";
    }
    case TaskKind::SortLayers: {
      out = sort_icl_header() + "\n\n";
      for (const auto& ex : examples) {
        out += "## Input:\n" + sort_icl_input(std::get<SortLayersTask>(ex.payload)) +
               "\n\n## Answer:\n" + oracle_answer(ex, style) + "\n\n";
      }
      return out + "## Input:\n" + sort_icl_input(std::get<SortLayersTask>(inst.payload)) +
             "\n\n## Answer:";
    }
    case TaskKind::CountCrossings: {
      out = crossing_icl_header() + "\n\n";
      for (const auto& ex : examples) {
        out += "## Input:\n" + crossing_icl_input(std::get<CountCrossingsTask>(ex.payload)) +
               "\n\n## Answer:\n" + oracle_answer(ex, style) + "\n\n";
      }
      return out + "## Input:\n" + crossing_icl_input(std::get<CountCrossingsTask>(inst.payload)) +
             "\n\n## Answer:";
    }
    case TaskKind::EdgeLength: {
      out = length_icl_header() + "\n\n";
      for (const auto& ex : examples) {
        out += "## Input:\n" + length_icl_input(std::get<EdgeLengthTask>(ex.payload)) +
               "\n## Answer:\n" + oracle_answer(ex, style) + "\n\n";
      }
      return out + "## Input:\n" + length_icl_input(std::get<EdgeLengthTask>(inst.payload)) +
             "\n## Answer:";
    }
    default: {
      for (const auto& ex : examples) {
        out += "## Input:\n" + utility_query(ex, false) + "\n\n## Answer:\n" +
               oracle_answer(ex, style) + "\n\n";
      }
      return out + "## Input:\n" + utility_query(inst, false) + "\n\n## Answer:";
    }
  }
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::string_view salt) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : salt) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = h ^ (seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<TaskInstance> sample_icl_examples(const std::vector<TaskInstance>& pool, int k,
                                              const std::string& exclude, std::uint64_t seed) {
  if (k < 1) throw InfeasibleError("ICL needs at least one example");
  std::vector<const TaskInstance*> candidates;
  std::set<std::string> seen;
  for (const auto& inst : pool) {
    if (inst.id != exclude && seen.insert(inst.id).second) candidates.push_back(&inst);
  }
  if (candidates.size() < static_cast<std::size_t>(k)) {
    throw InfeasibleError(fmt::format("ICL needs {} examples but the pool offers only {}", k,
                                      candidates.size()));
  }
  // Partial Fisher-Yates with a portable index draw.
  std::mt19937_64 rng(seed);
  std::vector<TaskInstance> out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
    out.push_back(*candidates[i]);
  }
  return out;
}

PromptSpec build_prompt(const TaskInstance& instance, const Strategy& strategy,
                        const std::vector<TaskInstance>& pool, std::uint64_t seed,
                        const PromptOptions& options) {
  PromptSpec spec;
  spec.task = instance.kind();
  spec.strategy = strategy;
  spec.graph_id = instance.id;
  spec.id = fmt::format("{}/{}/{}", to_string(spec.task), to_string(strategy), instance.id);
  spec.seed = seed;
  spec.instance = instance;
  switch (strategy.kind) {
    case Strategy::Kind::Standard: spec.text = standard_text(instance); break;
    case Strategy::Kind::Steps: spec.text = steps_text(instance); break;
    case Strategy::Kind::Icl: {
      std::vector<TaskInstance> same_task;
      for (const auto& p : pool) {
        if (p.kind() == spec.task) same_task.push_back(p);
      }
      const auto examples =
          sample_icl_examples(same_task, Strategy::icl(strategy.k).k, instance.id, seed);
      for (const auto& ex : examples) spec.icl_example_ids.push_back(ex.id);
      spec.text = icl_text(instance, examples);
      break;
    }
  }
  if (spec.text.size() > options.max_chars) {
    throw InfeasibleError(fmt::format("prompt {} has {} characters, over the budget of {}",
                                      spec.id, spec.text.size(), options.max_chars));
  }
  return spec;
}

}  // namespace layerlab
