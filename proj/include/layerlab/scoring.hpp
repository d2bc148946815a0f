#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "layerlab/answers.hpp"

namespace layerlab {

struct LayeringTruth {
  Graph graph;
  RankAssignment ranks;
};

struct SortTruth {
  Graph graph;
  LayeredOrdering input;
  LayeredOrdering oracle;
};

struct GenerationTruth {
  GraphGenerationTask request;
};

struct ConversionTruth {
  GraphFormat to;
  Graph graph;
};

struct SceneTruth {
  Graph people;
};

struct SvgTruth {
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

/// `Graph` alone is the GraphFromScene truth.
using Truth = std::variant<LayeringTruth, SortTruth, long, bool, GenerationTruth, ConversionTruth,
                           Graph, SceneTruth, SvgTruth>;

Truth truth_for(const TaskInstance& instance);

enum class OutcomeKind {
  Correct,
  IncorrectOver,
  IncorrectUnder,
  Malformed,
  PartialRatio,
  OrderingDelta,
};

enum class Delta { Fewer, Equal, More };

std::string_view to_string(OutcomeKind kind);
std::string_view to_string(Delta delta);

struct ScoreOutcome {
  OutcomeKind kind = OutcomeKind::Malformed;
  double ratio = 0.0;                 // PartialRatio
  std::optional<Delta> delta;         // OrderingDelta
  std::optional<long> crossings_before;
  std::optional<long> crossings_after;
  std::optional<bool> valid;          // layerings
  std::optional<bool> minimal_length; // layerings with total length = |E'|
  std::optional<bool> matches_oracle; // orderings
  std::optional<long> abs_error;      // numeric
  std::string reason;                 // Malformed
  std::string detail;
  std::vector<std::string> warnings;

  /// Histogram bucket: outcome name, "fewer"/"equal"/"more", or the ratio
  /// rounded down to a tenth ("0.5").
  std::string bucket() const;
};

/// Canonical left-to-right bucket order for a task's histogram.
std::vector<std::string> bucket_order(TaskKind task);

/// Malformed parses short-circuit. Throws ScoreTypeError when `parsed` and
/// `truth` do not belong to `task`.
ScoreOutcome score(TaskKind task, const Parsed& parsed, const Truth& truth);

/// Undirected, name-matched topology comparison.
ScoreOutcome score_scene_graph(const Graph& parsed, const Graph& truth);

}  // namespace layerlab
