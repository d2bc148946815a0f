#include "layerlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "layerlab/errors.hpp"

namespace layerlab {

namespace {

Json layers_to_json(const LayeredOrdering& o) { return o.layers; }

LayeredOrdering layers_from_json(const Json& j) {
  LayeredOrdering o;
  o.layers = j.get<std::vector<std::vector<NodeId>>>();
  return o;
}

Json edges_to_json(const std::vector<Edge>& edges) {
  Json out = Json::array();
  for (const Edge& e : edges) out.push_back({e.source, e.target});
  return out;
}

std::vector<Edge> edges_from_json(const Json& j) {
  std::vector<Edge> out;
  for (const auto& e : j) out.push_back({e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), std::nullopt});
  return out;
}

Json ranks_to_json(const std::map<NodeId, int>& ranks) {
  Json out = Json::object();
  for (const auto& [v, r] : ranks) out[std::to_string(v)] = r;
  return out;
}

std::string_view to_string(GraphProperty p) {
  return p == GraphProperty::Bulbaceous ? "bulbaceous" : "flamboyous";
}

GraphProperty parse_property(const std::string& s) {
  if (s == "bulbaceous") return GraphProperty::Bulbaceous;
  if (s == "flamboyous") return GraphProperty::Flamboyous;
  throw ParseError(fmt::format("unknown property '{}'", s));
}

Date date_from_json(const Json& j) {
  auto d = parse_date(j.get<std::string>());
  if (!d) throw ParseError(fmt::format("bad date {}", j.dump()));
  return *d;
}

OutcomeKind parse_outcome_kind(const std::string& s) {
  for (auto k : {OutcomeKind::Correct, OutcomeKind::IncorrectOver, OutcomeKind::IncorrectUnder,
                 OutcomeKind::Malformed, OutcomeKind::PartialRatio, OutcomeKind::OrderingDelta}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError(fmt::format("unknown outcome '{}'", s));
}

Delta parse_delta(const std::string& s) {
  for (auto d : {Delta::Fewer, Delta::Equal, Delta::More}) {
    if (to_string(d) == s) return d;
  }
  throw ParseError(fmt::format("unknown delta '{}'", s));
}

template <class T>
void put(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
std::optional<T> take(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  return fmt::format("{}.{:03d}Z", buf, ms);
}

std::vector<Json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open {}", path));
  std::vector<Json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::exception& e) {
      throw ParseError(fmt::format("{}:{}: {}", path, lineno, e.what()), lineno);
    }
  }
  return out;
}

template <class T, class F>
void write_jsonl(const std::vector<T>& items, const std::string& path, F&& to_json) {
  if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  std::ofstream out(path);
  if (!out) throw InfeasibleError(fmt::format("cannot write {}", path));
  for (const auto& item : items) out << to_json(item).dump() << '\n';
}

// Rethrows a JSON library error as ParseError so callers see one type.
template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ParseError(fmt::format("malformed {}: {}", what, e.what()));
  }
}

}  // namespace

Json graph_to_json(const Graph& g) { return Json::parse(emit_graph(g, GraphFormat::JsonGraph)); }

Graph graph_from_json(const Json& j) { return parse_graph(j.dump(), GraphFormat::JsonGraph); }

Json instance_to_json(const TaskInstance& instance) {
  Json j;
  j["id"] = instance.id;
  j["task"] = to_string(instance.kind());
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LayerAssignmentTask>) {
          j["graph"] = graph_to_json(t.graph);
          j["source"] = t.source;
        } else if constexpr (std::is_same_v<T, SortLayersTask>) {
          j["graph"] = graph_to_json(t.graph);
          j["input"] = layers_to_json(t.input);
        } else if constexpr (std::is_same_v<T, CountCrossingsTask>) {
          j["a"] = t.a;
          j["b"] = t.b;
          j["edges"] = edges_to_json(t.edges);
        } else if constexpr (std::is_same_v<T, EdgeLengthTask>) {
          j["graph"] = graph_to_json(t.graph);
          j["layers"] = layers_to_json(t.layers);
        } else if constexpr (std::is_same_v<T, GraphGenerationTask>) {
          j["nodes"] = t.nodes;
          j["edges"] = t.edges;
          if (t.timestamps) {
            j["timestamps"] = {{"first", format_date(t.timestamps->first)},
                               {"last", format_date(t.timestamps->last)}};
          }
          put(j, "min_weight", t.min_weight);
        } else if constexpr (std::is_same_v<T, FormatConversionTask>) {
          j["graph"] = graph_to_json(t.graph);
          j["from"] = to_string(t.from);
          j["to"] = to_string(t.to);
        } else if constexpr (std::is_same_v<T, PropertyCheckTask>) {
          j["graph"] = graph_to_json(t.graph);
          j["property"] = to_string(t.property);
        } else if constexpr (std::is_same_v<T, GraphFromSceneTask>) {
          j["scene"] = t.scene;
          j["truth"] = graph_to_json(t.truth);
        } else {
          j["graph"] = graph_to_json(t.graph);
        }
      },
      instance.payload);
  return j;
}

TaskInstance instance_from_json(const Json& j) {
  return guarded("task instance", [&]() -> TaskInstance {
    TaskInstance out;
    out.id = j.at("id").get<std::string>();
    switch (parse_task_kind(j.at("task").get<std::string>())) {
      case TaskKind::LayerAssignment:
        out.payload = LayerAssignmentTask{graph_from_json(j.at("graph")), j.at("source").get<NodeId>()};
        break;
      case TaskKind::SortLayers:
        out.payload = SortLayersTask{graph_from_json(j.at("graph")), layers_from_json(j.at("input"))};
        break;
      case TaskKind::CountCrossings:
        out.payload = CountCrossingsTask{j.at("a").get<std::vector<NodeId>>(),
                                         j.at("b").get<std::vector<NodeId>>(),
                                         edges_from_json(j.at("edges"))};
        break;
      case TaskKind::EdgeLength:
        out.payload = EdgeLengthTask{graph_from_json(j.at("graph")), layers_from_json(j.at("layers"))};
        break;
      case TaskKind::GraphGeneration: {
        GraphGenerationTask t;
        t.nodes = j.at("nodes").get<std::size_t>();
        t.edges = j.at("edges").get<std::size_t>();
        if (j.contains("timestamps")) {
          t.timestamps = DateRange{date_from_json(j["timestamps"].at("first")),
                                   date_from_json(j["timestamps"].at("last"))};
        }
        t.min_weight = take<double>(j, "min_weight");
        out.payload = t;
        break;
      }
      case TaskKind::FormatConversion:
        out.payload = FormatConversionTask{graph_from_json(j.at("graph")),
                                           parse_graph_format(j.at("from").get<std::string>()),
                                           parse_graph_format(j.at("to").get<std::string>())};
        break;
      case TaskKind::PropertyCheck:
        out.payload = PropertyCheckTask{graph_from_json(j.at("graph")),
                                        parse_property(j.at("property").get<std::string>())};
        break;
      case TaskKind::GraphFromScene:
        out.payload = GraphFromSceneTask{j.at("scene").get<std::string>(), graph_from_json(j.at("truth"))};
        break;
      case TaskKind::SceneFromGraph:
        out.payload = SceneFromGraphTask{graph_from_json(j.at("graph"))};
        break;
      case TaskKind::SvgFromDot:
        out.payload = SvgFromDotTask{graph_from_json(j.at("graph"))};
        break;
    }
    return out;
  });
}

Json spec_to_json(const PromptSpec& spec) {
  Json j;
  j["id"] = spec.id;
  j["task"] = to_string(spec.task);
  j["strategy"] = to_string(spec.strategy);
  j["graph_id"] = spec.graph_id;
  j["seed"] = spec.seed;
  j["icl_example_ids"] = spec.icl_example_ids;
  j["text"] = spec.text;
  j["instance"] = instance_to_json(spec.instance);
  return j;
}

PromptSpec spec_from_json(const Json& j) {
  return guarded("prompt spec", [&] {
    PromptSpec s;
    s.id = j.at("id").get<std::string>();
    s.task = parse_task_kind(j.at("task").get<std::string>());
    s.strategy = parse_strategy(j.at("strategy").get<std::string>());
    s.graph_id = j.value("graph_id", std::string());
    s.seed = j.value("seed", std::uint64_t{0});
    s.icl_example_ids = j.value("icl_example_ids", std::vector<std::string>{});
    s.text = j.at("text").get<std::string>();
    s.instance = instance_from_json(j.at("instance"));
    if (s.instance.kind() != s.task) {
      throw ParseError(fmt::format("spec {} mixes task {} with a {} instance", s.id,
                                   to_string(s.task), to_string(s.instance.kind())));
    }
    return s;
  });
}

Json parsed_to_json(const Parsed& parsed) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Malformed>) {
          return {{"malformed", v.reason}, {"detail", v.detail}};
        } else if constexpr (std::is_same_v<T, LayeringAnswer>) {
          return {{"ranks", ranks_to_json(v.ranks)}, {"unreachable", v.unreachable}};
        } else if constexpr (std::is_same_v<T, LayeredOrdering>) {
          return {{"layers", layers_to_json(v)}};
        } else if constexpr (std::is_same_v<T, long> || std::is_same_v<T, bool>) {
          return v;
        } else if constexpr (std::is_same_v<T, Graph>) {
          return graph_to_json(v);
        } else if constexpr (std::is_same_v<T, ConvertedGraph>) {
          return {{"format", to_string(v.format)}, {"graph", graph_to_json(v.graph)}};
        } else if constexpr (std::is_same_v<T, SvgSummary>) {
          return {{"well_formed", v.well_formed},
                  {"node_elements", v.node_elements},
                  {"edge_elements", v.edge_elements},
                  {"text_elements", v.text_elements}};
        } else {
          return {{"text", v.text}};
        }
      },
      parsed);
}

Json truth_to_json(const Truth& truth) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LayeringTruth>) {
          return {{"ranks", ranks_to_json(v.ranks.ranks)}, {"unreachable", v.ranks.unreachable}};
        } else if constexpr (std::is_same_v<T, SortTruth>) {
          return {{"input", layers_to_json(v.input)}, {"oracle", layers_to_json(v.oracle)}};
        } else if constexpr (std::is_same_v<T, long> || std::is_same_v<T, bool>) {
          return v;
        } else if constexpr (std::is_same_v<T, GenerationTruth>) {
          Json j = {{"nodes", v.request.nodes}, {"edges", v.request.edges}};
          if (v.request.timestamps) {
            j["timestamps"] = {{"first", format_date(v.request.timestamps->first)},
                               {"last", format_date(v.request.timestamps->last)}};
          }
          put(j, "min_weight", v.request.min_weight);
          return j;
        } else if constexpr (std::is_same_v<T, ConversionTruth>) {
          return {{"format", to_string(v.to)}, {"graph", graph_to_json(v.graph)}};
        } else if constexpr (std::is_same_v<T, Graph>) {
          return graph_to_json(v);
        } else if constexpr (std::is_same_v<T, SceneTruth>) {
          return {{"people", graph_to_json(v.people)}};
        } else {
          return {{"nodes", v.nodes}, {"edges", v.edges}};
        }
      },
      truth);
}

Json outcome_to_json(const ScoreOutcome& o) {
  Json j;
  j["kind"] = to_string(o.kind);
  j["bucket"] = o.bucket();
  if (o.kind == OutcomeKind::PartialRatio || o.kind == OutcomeKind::Correct) j["ratio"] = o.ratio;
  if (o.delta) j["delta"] = to_string(*o.delta);
  put(j, "crossings_before", o.crossings_before);
  put(j, "crossings_after", o.crossings_after);
  put(j, "valid", o.valid);
  put(j, "minimal_length", o.minimal_length);
  put(j, "matches_oracle", o.matches_oracle);
  put(j, "abs_error", o.abs_error);
  if (!o.reason.empty()) j["reason"] = o.reason;
  if (!o.detail.empty()) j["detail"] = o.detail;
  if (!o.warnings.empty()) j["warnings"] = o.warnings;
  return j;
}

ScoreOutcome outcome_from_json(const Json& j) {
  return guarded("outcome", [&] {
    ScoreOutcome o;
    o.kind = parse_outcome_kind(j.at("kind").get<std::string>());
    o.ratio = j.value("ratio", 0.0);
    if (auto d = take<std::string>(j, "delta")) o.delta = parse_delta(*d);
    o.crossings_before = take<long>(j, "crossings_before");
    o.crossings_after = take<long>(j, "crossings_after");
    o.valid = take<bool>(j, "valid");
    o.minimal_length = take<bool>(j, "minimal_length");
    o.matches_oracle = take<bool>(j, "matches_oracle");
    o.abs_error = take<long>(j, "abs_error");
    o.reason = j.value("reason", std::string());
    o.detail = j.value("detail", std::string());
    o.warnings = j.value("warnings", std::vector<std::string>{});
    return o;
  });
}

Json record_to_json(const ExperimentRecord& r) {
  Json j;
  j["spec_id"] = r.spec_id;
  j["task"] = to_string(r.task);
  j["strategy"] = to_string(r.strategy);
  j["seed"] = r.seed;
  j["graph_id"] = r.graph_id;
  j["icl_example_ids"] = r.icl_example_ids;
  j["prompt"] = r.prompt;
  j["response"] = r.response ? Json(*r.response) : Json(nullptr);
  j["parsed"] = r.parsed;
  j["truth"] = r.truth;
  j["outcome"] = outcome_to_json(r.outcome);
  j["abs_error"] = r.outcome.abs_error ? Json(*r.outcome.abs_error) : Json(nullptr);
  j["model"] = r.model;
  j["temperature"] = r.temperature;
  j["started_at"] = r.started_at;
  j["finished_at"] = r.finished_at;
  j["latency_ms"] = r.latency_ms;
  j["attempts"] = r.attempts;
  j["error"] = r.error;
  j["instance"] = r.instance;
  return j;
}

ExperimentRecord record_from_json(const Json& j) {
  return guarded("experiment record", [&] {
    ExperimentRecord r;
    r.spec_id = j.at("spec_id").get<std::string>();
    r.task = parse_task_kind(j.at("task").get<std::string>());
    r.strategy = parse_strategy(j.at("strategy").get<std::string>());
    r.seed = j.value("seed", std::uint64_t{0});
    r.graph_id = j.value("graph_id", std::string());
    r.icl_example_ids = j.value("icl_example_ids", std::vector<std::string>{});
    r.prompt = j.value("prompt", std::string());
    r.response = take<std::string>(j, "response");
    r.parsed = j.value("parsed", Json());
    r.truth = j.value("truth", Json());
    r.instance = j.value("instance", Json());
    r.outcome = outcome_from_json(j.at("outcome"));
    r.model = j.value("model", std::string());
    r.temperature = j.value("temperature", 0.0);
    r.started_at = j.value("started_at", std::string());
    r.finished_at = j.value("finished_at", std::string());
    r.latency_ms = j.value("latency_ms", 0L);
    r.attempts = j.value("attempts", 0);
    r.error = j.value("error", std::string());
    return r;
  });
}

ExperimentRecord score_response(const PromptSpec& spec, const std::string& response) {
  ExperimentRecord r;
  r.spec_id = spec.id;
  r.task = spec.task;
  r.strategy = spec.strategy;
  r.seed = spec.seed;
  r.graph_id = spec.graph_id;
  r.icl_example_ids = spec.icl_example_ids;
  r.prompt = spec.text;
  r.response = response;
  r.instance = instance_to_json(spec.instance);
  const Parsed parsed = parse_response(spec.task, response);
  const Truth truth = truth_for(spec.instance);
  r.parsed = parsed_to_json(parsed);
  r.truth = truth_to_json(truth);
  r.outcome = score(spec.task, parsed, truth);
  return r;
}

ExperimentRecord rescore(const ExperimentRecord& record) {
  if (!record.response) return record;
  PromptSpec spec;
  spec.id = record.spec_id;
  spec.task = record.task;
  spec.strategy = record.strategy;
  spec.seed = record.seed;
  spec.graph_id = record.graph_id;
  spec.icl_example_ids = record.icl_example_ids;
  spec.text = record.prompt;
  spec.instance = instance_from_json(record.instance);
  ExperimentRecord out = score_response(spec, *record.response);
  out.model = record.model;
  out.temperature = record.temperature;
  out.started_at = record.started_at;
  out.finished_at = record.finished_at;
  out.latency_ms = record.latency_ms;
  out.attempts = record.attempts;
  out.error = record.error;
  return out;
}

std::vector<PromptSpec> read_specs(const std::string& path) {
  std::vector<PromptSpec> out;
  for (const auto& j : read_jsonl(path)) out.push_back(spec_from_json(j));
  return out;
}

void write_specs(const std::vector<PromptSpec>& specs, const std::string& path) {
  write_jsonl(specs, path, spec_to_json);
}

std::vector<ExperimentRecord> read_records(const std::string& path) {
  std::vector<ExperimentRecord> out;
  for (const auto& j : read_jsonl(path)) out.push_back(record_from_json(j));
  return out;
}

void write_records(const std::vector<ExperimentRecord>& records, const std::string& path) {
  write_jsonl(records, path, record_to_json);
}

std::vector<ExperimentRecord> run_experiment(const std::vector<PromptSpec>& specs,
                                             ChatBackend& backend, std::ostream* sink,
                                             const RunOptions& options) {
  const int workers = std::max(1, std::min<int>(options.max_concurrency, static_cast<int>(specs.size())));
  ConcurrencyGovernor governor(options.max_concurrency, options.rate_limit_cool_down);
  if (auto* http = dynamic_cast<HttpBackend*>(&backend)) {
    http->on_rate_limit([&governor] { governor.signal_rate_limit(); });
  }

  std::vector<std::optional<ExperimentRecord>> done(specs.size());
  std::vector<ExperimentRecord> out;
  out.reserve(specs.size());
  std::mutex mu;
  std::atomic<std::size_t> next{0};

  auto run_one = [&](const PromptSpec& spec) {
    ExperimentRecord r;
    const std::string started = iso_now();
    try {
      GovernorSlot slot(governor);
      ChatRequest req = ChatRequest::for_prompt(spec, options.model);
      req.temperature = options.temperature;
      req.max_tokens = options.max_tokens;
      const auto t0 = std::chrono::steady_clock::now();
      ChatResponse resp = backend.complete(req);
      const auto t1 = std::chrono::steady_clock::now();
      r = score_response(spec, resp.content);
      r.model = resp.model.empty() ? options.model : resp.model;
      r.attempts = resp.attempts;
      r.latency_ms = resp.latency.count() > 0
                         ? resp.latency.count()
                         : std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    } catch (const std::exception& e) {
      const auto* transport = dynamic_cast<const TransportError*>(&e);
      r = ExperimentRecord{};
      r.spec_id = spec.id;
      r.task = spec.task;
      r.strategy = spec.strategy;
      r.seed = spec.seed;
      r.graph_id = spec.graph_id;
      r.icl_example_ids = spec.icl_example_ids;
      r.prompt = spec.text;
      r.instance = instance_to_json(spec.instance);
      r.truth = truth_to_json(truth_for(spec.instance));
      r.model = options.model;
      r.attempts = transport ? transport->attempts() : 1;
      r.error = e.what();
      r.outcome.kind = OutcomeKind::Malformed;
      r.outcome.reason = std::string(transport ? reason::kTransport : reason::kBackend);
      r.outcome.detail = e.what();
      r.parsed = Json{{"malformed", r.outcome.reason}, {"detail", r.outcome.detail}};
    }
    r.temperature = options.temperature;
    r.started_at = started;
    r.finished_at = iso_now();
    return r;
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      ExperimentRecord r = run_one(specs[i]);
      std::lock_guard lock(mu);
      done[i] = std::move(r);
      while (out.size() < specs.size() && done[out.size()]) {
        ExperimentRecord& ready = *done[out.size()];
        if (sink) {
          *sink << record_to_json(ready).dump() << '\n';
          sink->flush();
        }
        if (options.on_record) options.on_record(ready);
        out.push_back(std::move(ready));
        done[out.size() - 1].reset();
      }
    }
  };

  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

// ---------------------------------------------------------------- report

namespace {

std::vector<std::string> strategy_order() {
  return {"standard", "steps", "icl3", "icl4", "icl5"};
}

std::size_t task_rank(const std::string& task) { return static_cast<std::size_t>(parse_task_kind(task)); }

std::size_t strategy_rank(const std::string& s) {
  const auto order = strategy_order();
  return static_cast<std::size_t>(std::find(order.begin(), order.end(), s) - order.begin());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

}  // namespace

Report build_report(const std::vector<ExperimentRecord>& records) {
  using Key = std::pair<std::string, std::string>;  // task, strategy
  auto key_less = [](const Key& a, const Key& b) {
    return std::make_pair(task_rank(a.first), strategy_rank(a.second)) <
           std::make_pair(task_rank(b.first), strategy_rank(b.second));
  };
  std::map<Key, std::map<std::string, long>, decltype(key_less)> counts(key_less);
  std::map<Key, std::pair<long, long>, decltype(key_less)> errors(key_less);  // n, sum
  std::set<std::string> strategies;
  std::vector<Key> graph_order;  // (task, graph id) first appearance
  std::map<Key, std::map<std::string, std::string>> pair_cells;

  for (const auto& r : records) {
    const Key k{std::string(to_string(r.task)), to_string(r.strategy)};
    ++counts[k][r.outcome.bucket()];
    if (is_numeric(r.task)) {
      auto& e = errors[k];
      if (r.outcome.kind == OutcomeKind::IncorrectOver || r.outcome.kind == OutcomeKind::IncorrectUnder) {
        ++e.first;
        e.second += r.outcome.abs_error.value_or(0);
      }
    }
    strategies.insert(k.second);
    const Key g{k.first, r.graph_id};
    if (!pair_cells.count(g)) graph_order.push_back(g);
    pair_cells[g][k.second] = r.outcome.bucket();
  }

  Report report;
  for (const auto& [k, buckets] : counts) {
    std::vector<std::string> order = bucket_order(parse_task_kind(k.first));
    for (const auto& [b, _] : buckets) {
      if (std::find(order.begin(), order.end(), b) == order.end()) order.push_back(b);
    }
    for (const auto& b : order) {
      auto it = buckets.find(b);
      if (it != buckets.end() && it->second > 0) report.counts.push_back({k.first, k.second, b, it->second});
    }
  }
  for (const auto& [k, e] : errors) {
    report.errors.push_back({k.first, k.second, e.first,
                             e.first ? static_cast<double>(e.second) / e.first : 0.0});
  }
  for (const auto& s : strategy_order()) {
    if (strategies.count(s)) report.strategy_columns.push_back(s);
  }
  std::stable_sort(graph_order.begin(), graph_order.end(), [](const Key& a, const Key& b) {
    return task_rank(a.first) < task_rank(b.first);
  });
  for (const auto& g : graph_order) {
    std::vector<std::string> row{g.first, g.second};
    const auto& cells = pair_cells[g];
    for (const auto& s : report.strategy_columns) {
      auto it = cells.find(s);
      row.push_back(it == cells.end() ? "" : it->second);
    }
    report.pairings.push_back(std::move(row));
  }
  return report;
}

std::vector<std::string> write_report(const Report& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    const std::string path = (fs::path(out_dir) / name).string();
    std::ofstream f(path);
    if (!f) throw InfeasibleError(fmt::format("cannot write {}", path));
    written.push_back(path);
    return f;
  };

  {
    auto f = open("report.csv");
    f << csv_line({"task", "strategy", "outcome", "count"});
    for (const auto& r : report.counts) f << csv_line({r.task, r.strategy, r.bucket, std::to_string(r.count)});
  }
  {
    auto f = open("mean_error.csv");
    f << csv_line({"task", "strategy", "incorrect", "mean_abs_error"});
    for (const auto& e : report.errors) {
      f << csv_line({e.task, e.strategy, std::to_string(e.incorrect), fmt::format("{:.4f}", e.mean_abs_error)});
    }
  }
  {
    auto f = open("pairings.csv");
    std::vector<std::string> header{"task", "graph_id"};
    header.insert(header.end(), report.strategy_columns.begin(), report.strategy_columns.end());
    f << csv_line(header);
    for (const auto& row : report.pairings) f << csv_line(row);
  }

  std::vector<std::pair<std::string, std::string>> groups;
  for (const auto& r : report.counts) {
    if (groups.empty() || groups.back() != std::make_pair(r.task, r.strategy)) groups.emplace_back(r.task, r.strategy);
  }
  for (const auto& [task, strategy] : groups) {
    std::vector<std::pair<std::string, long>> buckets;
    for (const auto& r : report.counts) {
      if (r.task == task && r.strategy == strategy) buckets.emplace_back(r.bucket, r.count);
    }
    const SvgDocument doc = render_histogram_svg(buckets, fmt::format("{} / {}", task, strategy));
    auto f = open(fmt::format("hist_{}_{}.svg", task, strategy));
    f << doc.str();
  }
  return written;
}

}  // namespace layerlab
