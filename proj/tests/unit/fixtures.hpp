#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "layerlab/experiment.hpp"

namespace fixtures {

using namespace layerlab;

inline std::string read(const std::string& relative) {
  std::ifstream in(std::string(LAYERLAB_TEST_DATA) + "/" + relative, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + relative);
  std::ostringstream ss;
  ss << in.rdbuf();
  // Fixture files carry one extra newline after the quoted text.
  std::string text = ss.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

inline std::vector<Edge> pairs(std::initializer_list<std::pair<NodeId, NodeId>> list) {
  std::vector<Edge> out;
  for (auto [s, t] : list) out.push_back({s, t, std::nullopt});
  return out;
}

inline Graph graph(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> list) {
  return Graph::from_pairs(n, std::vector<std::pair<NodeId, NodeId>>(list));
}

inline LayeredOrdering layers(std::vector<std::vector<NodeId>> l) { return LayeredOrdering{std::move(l)}; }

// 10-node rank-assignment query graph.
inline Graph rank_query() {
  return graph(10, {{5, 0}, {6, 1}, {6, 2}, {2, 7}, {7, 4}, {8, 2}, {9, 7}, {9, 8}, {9, 5}, {3, 5}});
}

inline std::vector<Graph> rank_examples() {
  return {
      graph(11, {{0, 1}, {0, 2}, {3, 4}, {4, 5}, {5, 6}, {6, 1}, {1, 5}, {3, 1}, {3, 2}, {1, 7},
                 {7, 8}, {8, 3}, {9, 8}, {10, 1}, {10, 6}}),
      graph(11, {{0, 7}, {7, 1}, {6, 2}, {2, 5}, {5, 3}, {4, 8}, {8, 3}, {1, 9}, {9, 6}, {10, 1},
                 {10, 6}, {10, 5}}),
      graph(11, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {5, 6}, {0, 5}, {3, 0}, {3, 2}, {0, 7}, {7, 8},
                 {1, 8}, {9, 4}, {7, 9}, {2, 5}, {10, 6}, {10, 1}, {10, 3}}),
  };
}

// Four-layer ordering instance used in the short sorting prompt.
inline SortLayersTask median_short() {
  return {graph(10, {{0, 1}, {1, 2}, {3, 2}, {0, 3}, {4, 5}, {6, 5}, {1, 7}, {1, 6}, {1, 4}, {3, 4},
                     {1, 8}, {1, 9}}),
          layers({{0}, {1, 3}, {2, 7, 6, 4, 8, 9}, {5}})};
}

// Five-layer ordering instance used in the long sorting prompts.
inline SortLayersTask median_long() {
  return {graph(11, {{2, 5}, {1, 6}, {6, 3}, {0, 1}, {2, 4}, {2, 7}, {1, 8}, {1, 2}, {1, 9}, {9, 5},
                     {5, 10}, {7, 10}}),
          layers({{0}, {1}, {6, 8, 2, 9}, {3, 5, 4, 7}, {10}})};
}

inline std::vector<SortLayersTask> median_examples() {
  return {
      {graph(10, {{3, 2}, {0, 3}, {4, 5}, {4, 1}, {3, 4}, {1, 7}, {8, 7}, {2, 8}, {4, 6}, {3, 9}}),
       layers({{0}, {3}, {2, 4, 9}, {8, 5, 1, 6}, {7}})},
      {graph(10, {{0, 1}, {3, 2}, {4, 3}, {4, 5}, {2, 7}, {8, 6}, {7, 8}, {4, 9}, {0, 4}}),
       layers({{0}, {1, 4}, {3, 5, 9}, {2}, {7}, {8}, {6}})},
      {graph(10, {{2, 5}, {1, 4}, {3, 1}, {9, 2}, {9, 3}, {9, 8}, {9, 6}, {9, 7}, {0, 9}, {6, 1}}),
       layers({{0}, {9}, {2, 3, 8, 6, 7}, {5, 1}, {4}})},
      {graph(10, {{0, 8}, {8, 1}, {8, 2}, {2, 7}, {7, 3}, {6, 3}, {2, 6}, {6, 4}, {9, 5}, {4, 9}}),
       layers({{0}, {8}, {1, 2}, {7, 6}, {3, 4}, {9}, {5}})},
      {graph(11, {{0, 5}, {5, 1}, {1, 6}, {8, 4}, {0, 8}, {9, 2}, {8, 9}, {5, 10}, {10, 2}, {8, 10},
                  {10, 6}, {10, 7}, {10, 3}}),
       layers({{0}, {5, 8}, {1, 10, 4, 9}, {6, 2, 7, 3}})},
  };
}

inline CountCrossingsTask crossing_query() {
  return {{6, 4, 7, 8, 9, 2}, {5, 10}, pairs({{4, 5}, {6, 5}, {6, 10}, {4, 10}})};
}

inline std::vector<CountCrossingsTask> crossing_examples() {
  return {
      {{0}, {5}, pairs({{0, 5}})},
      {{1}, {6, 7}, pairs({{1, 6}, {1, 7}})},
      {{7, 4, 2, 3}, {9, 8, 5}, pairs({{3, 8}, {3, 9}, {4, 9}, {2, 8}, {2, 5}})},
      {{9}, {5}, pairs({{9, 5}})},
      {{3, 5, 4, 7}, {10}, pairs({{5, 10}, {7, 10}})},
  };
}

inline EdgeLengthTask length_query() {
  return {graph(11, {{0, 6}, {1, 6}, {7, 4}, {3, 8}, {2, 9}, {2, 10}, {0, 10}, {10, 4}}),
          layers({{0}, {1, 2, 3, 7}, {6}, {10}, {5, 8, 9}, {4}})};
}

inline std::vector<EdgeLengthTask> length_examples() {
  return {
      {graph(11, {{0, 1}, {1, 2}, {0, 3}, {5, 4}, {5, 6}, {1, 6}, {1, 8}, {8, 2}, {7, 4}, {9, 2},
                  {9, 3}, {7, 10}}),
       layers({{0}, {1, 5, 7, 9}, {8}, {6, 10}, {3}, {2, 4}})},
      {graph(11, {{0, 1}, {1, 2}, {3, 2}, {0, 3}, {7, 6}, {7, 1}, {1, 6}, {4, 1}, {4, 3}, {1, 8},
                  {2, 8}, {2, 5}, {9, 5}, {9, 6}, {3, 10}, {1, 10}, {0, 10}}),
       layers({{0}, {4, 7, 9}, {3}, {1}, {2, 6, 10}, {5, 8}})},
      {graph(11, {{0, 7}, {1, 7}, {6, 2}, {5, 2}, {5, 3}, {0, 2}, {8, 9}, {9, 3}, {10, 6}, {10, 9}}),
       layers({{0}, {1, 4, 5, 8}, {10}, {6, 9}, {2, 3, 7}})},
      {graph(11, {{0, 6}, {6, 1}, {7, 1}, {7, 2}, {7, 4}, {9, 3}, {4, 9}, {5, 10}}),
       layers({{0}, {7}, {2, 4, 6}, {5, 9}, {}, {1, 3, 8, 10}})},
      {graph(11, {{4, 2}, {2, 5}, {1, 5}, {6, 1}, {0, 7}, {3, 8}, {1, 2}, {6, 9}, {0, 9}, {10, 5}}),
       layers({{0}, {3, 4, 6, 7, 10}, {8, 9}, {1}, {2}, {5}})},
  };
}

// Five colleagues; people interact along these six pairs.
inline Graph office_truth() {
  std::vector<Node> nodes;
  for (const char* name : {"Alice", "Bob", "Claire", "Daniel", "Ed"}) {
    nodes.push_back({static_cast<NodeId>(nodes.size()), std::string(name), std::nullopt});
  }
  return Graph(nodes, pairs({{0, 1}, {0, 2}, {1, 3}, {3, 2}, {3, 4}, {2, 4}}), false);
}

/// Runs `build_prompt` over seeds until the sampled example ids equal
/// `wanted`; returns the prompt text or "" when no seed in range does.
inline std::string prompt_with_examples(const TaskInstance& query, const std::vector<TaskInstance>& pool,
                                        const std::vector<std::string>& wanted, int k) {
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    PromptSpec spec = build_prompt(query, Strategy::icl(k), pool, seed);
    if (spec.icl_example_ids == wanted) return spec.text;
  }
  return {};
}

}  // namespace fixtures
