#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "layerlab/llm.hpp"
#include "layerlab/scoring.hpp"

namespace layerlab {

using Json = nlohmann::ordered_json;

Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);

Json instance_to_json(const TaskInstance& instance);
TaskInstance instance_from_json(const Json& j);

Json spec_to_json(const PromptSpec& spec);
PromptSpec spec_from_json(const Json& j);

Json parsed_to_json(const Parsed& parsed);
Json truth_to_json(const Truth& truth);
Json outcome_to_json(const ScoreOutcome& outcome);
ScoreOutcome outcome_from_json(const Json& j);

struct ExperimentRecord {
  std::string spec_id;
  TaskKind task = TaskKind::LayerAssignment;
  Strategy strategy;
  std::uint64_t seed = 0;
  std::string graph_id;
  std::vector<std::string> icl_example_ids;
  std::string prompt;
  std::optional<std::string> response;  // absent when the backend failed
  Json parsed;
  Json truth;
  Json instance;
  ScoreOutcome outcome;
  std::string model;
  double temperature = 0.0;
  std::string started_at;   // UTC, ISO 8601
  std::string finished_at;
  long latency_ms = 0;
  int attempts = 0;
  std::string error;
};

Json record_to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const Json& j);

/// Parses and scores `response` against the spec's oracle truth. Fills
/// everything except the timing/model fields.
ExperimentRecord score_response(const PromptSpec& spec, const std::string& response);

/// Recomputes parsed, truth and outcome from the stored response and
/// instance. Records without a response are returned unchanged.
ExperimentRecord rescore(const ExperimentRecord& record);

std::vector<PromptSpec> read_specs(const std::string& path);
void write_specs(const std::vector<PromptSpec>& specs, const std::string& path);
std::vector<ExperimentRecord> read_records(const std::string& path);
void write_records(const std::vector<ExperimentRecord>& records, const std::string& path);

struct RunOptions {
  int max_concurrency = 4;
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;
  int max_tokens = 2048;
  std::chrono::milliseconds rate_limit_cool_down{30'000};
  /// Called after each record is written, in spec order.
  std::function<void(const ExperimentRecord&)> on_record;
};

/// Sends every spec as its own single-message conversation. Records come
/// back, and are appended to `sink`, in spec order whatever the completion
/// order. A failing spec becomes a Malformed record; the batch continues.
std::vector<ExperimentRecord> run_experiment(const std::vector<PromptSpec>& specs,
                                             ChatBackend& backend, std::ostream* sink,
                                             const RunOptions& options = {});

struct CountRow {
  std::string task;
  std::string strategy;
  std::string bucket;
  long count = 0;
};

struct ErrorRow {
  std::string task;
  std::string strategy;
  long incorrect = 0;  // parseable but wrong
  double mean_abs_error = 0.0;
};

struct Report {
  std::vector<CountRow> counts;   // canonical bucket order, zero rows omitted
  std::vector<ErrorRow> errors;   // numeric tasks only
  /// task, graph id, then one bucket per strategy column ("" when absent).
  std::vector<std::string> strategy_columns;
  std::vector<std::vector<std::string>> pairings;
};

Report build_report(const std::vector<ExperimentRecord>& records);

/// report.csv, mean_error.csv, pairings.csv and one histogram SVG per
/// (task, strategy). Returns the written paths.
std::vector<std::string> write_report(const Report& report, const std::string& out_dir);

}  // namespace layerlab
