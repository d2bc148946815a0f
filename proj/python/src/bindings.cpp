#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "layerlab/answers.hpp"
#include "layerlab/errors.hpp"
#include "layerlab/experiment.hpp"
#include "layerlab/graph.hpp"
#include "layerlab/layout.hpp"
#include "layerlab/prompts.hpp"
#include "layerlab/render.hpp"
#include "layerlab/scoring.hpp"
#include "layerlab/tasks.hpp"

namespace py = pybind11;
using namespace layerlab;

namespace {

using EdgeTuple = std::tuple<NodeId, NodeId, std::optional<double>>;
using Layers = std::vector<std::vector<NodeId>>;
using Ranks = std::map<NodeId, int>;

std::vector<Edge> to_edges(const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  std::vector<Edge> out;
  for (const auto& [s, t] : pairs) out.push_back({s, t, std::nullopt});
  return out;
}

RankAssignment to_assignment(const Ranks& ranks) {
  RankAssignment r;
  r.ranks = ranks;
  return r;
}

// Python sees JSON documents as plain dicts.
py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_layerlab, m) {
  m.doc() = "Layered graph drawing and LLM prompt experiments";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<GraphError>(m, "GraphError", base.ptr());
  auto infeasible = py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<LossyEmissionError>(m, "LossyEmissionError", infeasible.ptr());
  py::register_exception<ScoreTypeError>(m, "ScoreTypeError", base.ptr());
  py::register_exception<TransportError>(m, "TransportError", base.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init([](std::vector<NodeId> nodes, std::vector<EdgeTuple> edges, bool directed) {
             std::vector<Node> ns;
             for (NodeId id : nodes) ns.push_back({id, std::nullopt, std::nullopt});
             std::vector<Edge> es;
             for (const auto& [s, t, w] : edges) es.push_back({s, t, w});
             return Graph(std::move(ns), std::move(es), directed);
           }),
           py::arg("nodes"), py::arg("edges"), py::arg("directed") = true)
      .def_static(
          "parse", [](const std::string& text, const std::string& format) {
            return parse_graph(text, parse_graph_format(format));
          },
          py::arg("text"), py::arg("format"))
      .def(
          "emit", [](const Graph& g, const std::string& format, bool allow_lossy) {
            EmitOptions o;
            o.allow_lossy = allow_lossy;
            return emit_graph(g, parse_graph_format(format), o);
          },
          py::arg("format"), py::arg("allow_lossy") = false)
      .def_property_readonly("nodes",
                             [](const Graph& g) {
                               std::vector<NodeId> ids;
                               for (const auto& n : g.nodes()) ids.push_back(n.id);
                               return ids;
                             })
      .def_property_readonly("edges",
                             [](const Graph& g) {
                               std::vector<EdgeTuple> out;
                               for (const auto& e : g.edges()) out.emplace_back(e.source, e.target, e.weight);
                               return out;
                             })
      .def_property_readonly("directed", &Graph::directed)
      .def("__len__", &Graph::node_count)
      .def("__repr__", [](const Graph& g) {
        return "<Graph nodes=" + std::to_string(g.node_count()) + " edges=" + std::to_string(g.edge_count()) + ">";
      });

  m.def(
      "generate_graph",
      [](std::size_t n, std::size_t m, std::uint64_t seed, bool connected, bool directed, bool simple) {
        GeneratorOptions o;
        o.connected = connected;
        o.directed = directed;
        o.simple = simple;
        return generate_random_graph(n, m, o, seed);
      },
      py::arg("nodes"), py::arg("edges"), py::arg("seed") = 0, py::arg("connected") = false,
      py::arg("directed") = false, py::arg("simple") = true);
  m.def("is_bulbaceous", &is_bulbaceous);
  m.def("is_flamboyous", &is_flamboyous);

  m.def(
      "bfs_ranks", [](const Graph& g, NodeId source) { return assign_layers_bfs(g, source).ranks; },
      py::arg("graph"), py::arg("source") = 0);
  m.def(
      "bfs_layers", [](const Graph& g, NodeId source) { return layered_bfs(g, source).ordering.layers; }, py::arg("graph"),
      py::arg("source") = 0, "Layers in BFS discovery order.");
  m.def("remove_same_layer_edges",
        [](const Graph& g, const Ranks& ranks) { return remove_same_layer_edges(g, to_assignment(ranks)); });
  m.def("total_edge_length",
        [](const Ranks& ranks, const Graph& g) { return total_edge_length(to_assignment(ranks), g); });
  m.def("count_crossings",
        [](const std::vector<NodeId>& a, const std::vector<NodeId>& b,
           const std::vector<std::pair<NodeId, NodeId>>& edges) {
          return count_crossings_bipartite(a, b, to_edges(edges)).count;
        });
  m.def("total_crossings",
        [](const Layers& layers, const Graph& g) { return count_crossings_total({layers}, g).total; });
  m.def(
      "median_sweep",
      [](const Layers& layers, const Graph& g, int passes) { return median_sweep({layers}, g, passes).layers; },
      py::arg("layers"), py::arg("graph"), py::arg("passes") = 1);
  m.def(
      "render_svg",
      [](const Graph& g, const Layers& layers, double spacing) {
        return render_layout_svg(g, assign_coordinates({layers}, spacing)).str();
      },
      py::arg("graph"), py::arg("layers"), py::arg("spacing") = 80.0);

  py::class_<TaskInstance>(m, "TaskInstance")
      .def_readonly("id", &TaskInstance::id)
      .def_property_readonly("task", [](const TaskInstance& t) { return std::string(to_string(t.kind())); })
      .def("to_dict", [](const TaskInstance& t) { return to_python(instance_to_json(t)); });

  m.def(
      "make_instances",
      [](const std::string& task, const std::string& id, const Graph& g, NodeId source, const std::string& layering,
         std::uint64_t seed) {
        switch (parse_task_kind(task)) {
          case TaskKind::LayerAssignment: return std::vector{make_layer_assignment(id, g, source)};
          case TaskKind::SortLayers: return std::vector{make_sort_layers(id, g, source)};
          case TaskKind::CountCrossings: return make_count_crossings(id, g, source);
          case TaskKind::EdgeLength:
            return std::vector{make_edge_length(id, g, source,
                                                layering == "random" ? EdgeLayering::Random : EdgeLayering::Bfs, 6,
                                                seed)};
          case TaskKind::SceneFromGraph: return std::vector{make_scene_from_graph(id, g)};
          case TaskKind::GraphFromScene: return std::vector{make_graph_from_scene(id, g)};
          case TaskKind::SvgFromDot: return std::vector{make_svg_from_dot(id, g)};
          default: throw InfeasibleError("task '" + task + "' is not built from a single graph");
        }
      },
      py::arg("task"), py::arg("id"), py::arg("graph"), py::arg("source") = 0, py::arg("layering") = "bfs",
      py::arg("seed") = 0);

  py::class_<PromptSpec>(m, "PromptSpec")
      .def_readonly("id", &PromptSpec::id)
      .def_readonly("text", &PromptSpec::text)
      .def_readonly("seed", &PromptSpec::seed)
      .def_readonly("icl_example_ids", &PromptSpec::icl_example_ids)
      .def_readonly("instance", &PromptSpec::instance)
      .def_property_readonly("strategy", [](const PromptSpec& s) { return to_string(s.strategy); })
      .def("to_dict", [](const PromptSpec& s) { return to_python(spec_to_json(s)); });

  m.def(
      "build_prompt",
      [](const TaskInstance& inst, const std::string& strategy, const std::vector<TaskInstance>& pool,
         std::uint64_t seed) { return build_prompt(inst, parse_strategy(strategy), pool, seed); },
      py::arg("instance"), py::arg("strategy") = "standard", py::arg("pool") = std::vector<TaskInstance>{},
      py::arg("seed") = 0);
  m.def(
      "oracle_answer",
      [](const TaskInstance& inst, const std::string& strategy) {
        return oracle_answer(inst, parse_strategy(strategy));
      },
      py::arg("instance"), py::arg("strategy") = "standard");
  m.def(
      "score_response",
      [](const PromptSpec& spec, const std::string& response) {
        return to_python(record_to_json(score_response(spec, response)));
      },
      py::arg("spec"), py::arg("response"), "Parse and score a response; returns the record as a dict.");
}
