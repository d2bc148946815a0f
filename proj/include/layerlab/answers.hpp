#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "layerlab/render.hpp"
#include "layerlab/tasks.hpp"

namespace layerlab {

/// Reason codes carried by Malformed.
namespace reason {
inline constexpr std::string_view kNoAnswer = "no_answer";
inline constexpr std::string_view kNonNumeric = "non_numeric";
inline constexpr std::string_view kDuplicateNode = "duplicate_node";
inline constexpr std::string_view kNonPermutation = "non_permutation";
inline constexpr std::string_view kBadLayerIndex = "bad_layer_index";
inline constexpr std::string_view kNoBlock = "no_block";
inline constexpr std::string_view kInvalidGraph = "invalid_graph";
inline constexpr std::string_view kInvalidXml = "invalid_xml";
inline constexpr std::string_view kTransport = "transport";
inline constexpr std::string_view kBackend = "backend_error";
}  // namespace reason

struct Malformed {
  std::string reason;
  std::string detail;
};

struct LayeringAnswer {
  std::map<NodeId, int> ranks;
  std::vector<NodeId> unreachable;
};

struct ConvertedGraph {
  GraphFormat format;
  Graph graph;
};

struct SceneText {
  std::string text;
};

using Parsed = std::variant<Malformed, LayeringAnswer, LayeredOrdering, long, bool, Graph,
                            ConvertedGraph, SvgSummary, SceneText>;

/// Never throws. Anything that does not carry a well-formed answer for
/// `task` comes back as Malformed with a reason code.
Parsed parse_response(TaskKind task, std::string_view text);

/// Answer text in the format the task's prompt asks for under `strategy`.
/// With `noise`, the answer is deliberately wrong in one small way chosen
/// by the noise value (numeric off by one, adjacent transposition, one rank
/// shifted, boolean flipped, one edge dropped).
std::string oracle_answer(const TaskInstance& instance, const Strategy& strategy,
                          std::optional<std::uint64_t> noise = {});

/// Ground-truth layer ordering after one median sweep.
LayeredOrdering oracle_ordering(const SortLayersTask& task);

/// Graph the oracle hands back for a generation request.
Graph oracle_generated_graph(const GraphGenerationTask& task, std::uint64_t seed);

}  // namespace layerlab
