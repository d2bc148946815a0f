#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "layerlab/errors.hpp"
#include "layerlab/experiment.hpp"
#include "layerlab/render.hpp"

namespace layerlab::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> task_names() {
  std::vector<std::string> out;
  for (TaskKind t : kAllTasks) out.emplace_back(to_string(t));
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("{}: cannot open file", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InfeasibleError(fmt::format("{}: cannot write file", path));
  out << text;
}

GraphFormat format_for(const std::string& path, const std::string& flag) {
  if (!flag.empty()) return parse_graph_format(flag);
  if (auto f = format_from_extension(path)) return *f;
  throw InfeasibleError(fmt::format("{}: cannot infer the graph format, pass --format", path));
}

Graph load_graph(const std::string& path, const std::string& format_flag) {
  const GraphFormat format = format_for(path, format_flag);
  const std::string text = slurp(path);
  try {
    return parse_graph(text, format);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}:{}:{}: {}", path, e.line(), e.column(), e.message()),
                     e.line(), e.column());
  } catch (const GraphError& e) {
    throw GraphError(fmt::format("{}: {}", path, e.what()));
  }
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const Json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()));
  }
}

Json ranks_json(const RankAssignment& r) {
  Json j;
  if (r.source) j["source"] = *r.source;
  Json ranks = Json::object();
  for (const auto& [v, k] : r.ranks) ranks[std::to_string(v)] = k;
  j["ranks"] = ranks;
  j["unreachable"] = r.unreachable;
  return j;
}

RankAssignment ranks_from(const Json& j) {
  try {
    RankAssignment r;
    if (j.contains("source")) r.source = j["source"].get<NodeId>();
    for (const auto& [k, v] : j.at("ranks").items()) {
      r.ranks[static_cast<NodeId>(std::stoul(k))] = v.get<int>();
    }
    r.unreachable = j.value("unreachable", std::vector<NodeId>{});
    return r;
  } catch (const std::exception& e) {
    throw ParseError(fmt::format("malformed ranks file: {}", e.what()));
  }
}

LayeredOrdering ordering_from(const Json& j) {
  try {
    LayeredOrdering o;
    o.layers = j.at("layers").get<std::vector<std::vector<NodeId>>>();
    o.check_unique();
    return o;
  } catch (const Json::exception& e) {
    throw ParseError(fmt::format("malformed ordering file: {}", e.what()));
  }
}

Json ordering_json(const LayeredOrdering& o) { return Json{{"layers", o.layers}}; }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Graph files named on the command line; directories contribute every
// file with a recognised extension, sorted by name.
std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && format_from_extension(e.path().string())) {
          found.push_back(e.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(in);
    }
  }
  return out;
}

Strategy strategy_from(const std::string& name, int icl_k) {
  if (name == "icl") return Strategy::icl(icl_k);
  return parse_strategy(name);
}

struct PromptArgs {
  std::vector<std::string> inputs;
  std::string format;
  std::string task = "layer-assignment";
  std::string strategy = "standard";
  int icl_k = 3;
  std::uint64_t seed = 0;
  NodeId source = 0;
  std::size_t min_nodes = 10;
  std::size_t max_nodes = 11;
  std::string edge_layering = "bfs";
  int num_layers = 6;
  std::string from_format = "graphml";
  std::string to_format = "dot";
  std::string property = "bulbaceous";
  std::size_t max_chars = PromptOptions{}.max_chars;
  std::string out;
};

std::vector<TaskInstance> instances_for(TaskKind task, const std::string& id, const Graph& g,
                                        const PromptArgs& a) {
  switch (task) {
    case TaskKind::LayerAssignment: return {make_layer_assignment(id, g, a.source)};
    case TaskKind::SortLayers: return {make_sort_layers(id, g, a.source)};
    case TaskKind::CountCrossings: return make_count_crossings(id, g, a.source);
    case TaskKind::EdgeLength: {
      const auto mode = a.edge_layering == "random" ? EdgeLayering::Random : EdgeLayering::Bfs;
      return {make_edge_length(id, g, a.source, mode, a.num_layers, mix_seed(a.seed, id))};
    }
    case TaskKind::GraphGeneration:
      return {make_graph_generation(id, g.node_count(), g.edge_count(),
                                    DateRange{*parse_date("1970-01-01"), *parse_date("1970-12-31")},
                                    2.0)};
    case TaskKind::FormatConversion:
      return {make_format_conversion(id, g, parse_graph_format(a.from_format),
                                     parse_graph_format(a.to_format))};
    case TaskKind::PropertyCheck:
      return {make_property_check(id, g,
                                  a.property == "flamboyous" ? GraphProperty::Flamboyous
                                                             : GraphProperty::Bulbaceous)};
    case TaskKind::GraphFromScene: return {make_graph_from_scene(id, g)};
    case TaskKind::SceneFromGraph: return {make_scene_from_graph(id, g)};
    case TaskKind::SvgFromDot: return {make_svg_from_dot(id, g)};
  }
  return {};
}

int cmd_prompts(const PromptArgs& a, std::ostream& out, std::ostream& err) {
  const TaskKind task = parse_task_kind(a.task);
  const Strategy strategy = strategy_from(a.strategy, a.icl_k);
  if (a.edge_layering != "bfs" && a.edge_layering != "random") {
    throw InfeasibleError("--edge-layering must be bfs or random");
  }
  if (a.property != "bulbaceous" && a.property != "flamboyous") {
    throw InfeasibleError("--property must be bulbaceous or flamboyous");
  }
  std::vector<TaskInstance> pool;
  std::size_t skipped = 0;
  for (const auto& path : expand_inputs(a.inputs)) {
    const Graph g = load_graph(path, a.format);
    if (g.node_count() < a.min_nodes || g.node_count() > a.max_nodes) {
      ++skipped;
      continue;
    }
    const std::string id = fs::path(path).stem().string();
    try {
      for (auto& inst : instances_for(task, id, g, a)) pool.push_back(std::move(inst));
    } catch (const InfeasibleError& e) {
      err << fmt::format("warning: {}: skipped ({})\n", path, e.what());
      ++skipped;
    }
  }
  if (pool.empty()) throw InfeasibleError("no graph passed the node-count filter");
  std::vector<PromptSpec> specs;
  PromptOptions options;
  options.max_chars = a.max_chars;
  for (const auto& inst : pool) {
    specs.push_back(build_prompt(inst, strategy, pool, mix_seed(a.seed, inst.id), options));
  }
  write_specs(specs, a.out);
  out << fmt::format("{} prompt specs written to {} ({} graphs skipped)\n", specs.size(), a.out,
                     skipped);
  return kOk;
}

struct RunArgs {
  std::string specs;
  std::string responder = "oracle";
  double noise_rate = 0.0;
  std::uint64_t seed = 0;
  std::string replay;
  std::string endpoint;
  std::string config;
  std::string model = "gpt-3.5-turbo";
  int max_concurrency = 4;
  std::string out;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  const auto specs = read_specs(a.specs);
  std::unique_ptr<ChatBackend> backend;
  if (a.responder == "oracle") {
    backend = std::make_unique<OracleResponder>(specs);
  } else if (a.responder == "noisy") {
    backend = std::make_unique<NoisyResponder>(specs, a.noise_rate, a.seed);
  } else if (a.responder == "replay") {
    if (a.replay.empty()) throw InfeasibleError("--responder replay needs --replay <transcript>");
    backend = std::make_unique<ReplayResponder>(a.replay);
  } else {
    HttpConfig config = a.config.empty() ? HttpConfig{} : load_http_config(a.config);
    if (!a.endpoint.empty()) config.base_url = a.endpoint;
    backend = std::make_unique<HttpBackend>(config);
  }
  RunOptions options;
  options.max_concurrency = a.max_concurrency;
  options.model = a.model;
  if (auto parent = fs::path(a.out).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream sink(a.out);
  if (!sink) throw InfeasibleError(fmt::format("{}: cannot write file", a.out));
  const auto records = run_experiment(specs, *backend, &sink, options);
  std::size_t transport = 0, failed = 0;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++failed;
      err << fmt::format("warning: {}: {}\n", r.spec_id, r.error);
    }
    transport += r.outcome.reason == reason::kTransport;
  }
  out << fmt::format("{} records written to {} ({} failed)\n", records.size(), a.out, failed);
  return transport ? kTransport : kOk;
}

int cmd_layout(const std::string& input, const std::string& format, NodeId source, int passes,
               const std::string& out_dir, std::ostream& out) {
  const Graph g = load_graph(input, format);
  const BfsLayering bfs = layered_bfs(g, source);
  const Graph pruned = remove_same_layer_edges(g, bfs.ranks);
  const LayeredOrdering swept = median_sweep(bfs.ordering, pruned, passes);
  const GridPositions grid = assign_coordinates(swept, 80.0);
  const SvgDocument svg = render_layout_svg(pruned, grid);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  spit((dir / "ranks.json").string(), dump(ranks_json(bfs.ranks)));
  spit((dir / "pruned.json").string(), emit_graph(pruned, GraphFormat::JsonGraph));
  spit((dir / "ordering.json").string(), dump(ordering_json(bfs.ordering)));
  spit((dir / "swept.json").string(), dump(ordering_json(swept)));
  Json pos = Json::object();
  for (const auto& [v, p] : grid.positions) pos[std::to_string(v)] = {p.x, p.y};
  spit((dir / "positions.json").string(), dump(pos));
  spit((dir / "layout.svg").string(), svg.str());

  const long before = count_crossings_total(bfs.ordering, pruned).total;
  const long after = count_crossings_total(swept, pruned).total;
  out << fmt::format("layers: {}\ncrossings before sweep: {}\ncrossings after sweep: {}\n",
                     bfs.ordering.layers.size(), before, after);
  for (const auto& w : svg.warnings) out << "warning: " << w << "\n";
  return kOk;
}

int cmd_metrics(const std::string& input, const std::string& format, const std::string& ordering_path,
                const std::string& ranks_path, std::optional<NodeId> source, bool crossings,
                bool edge_length, std::ostream& out) {
  Graph g = load_graph(input, format);
  if (!crossings && !edge_length) crossings = edge_length = true;
  std::optional<LayeredOrdering> ordering;
  std::optional<RankAssignment> ranks;
  if (!ordering_path.empty()) {
    ordering = ordering_from(read_json(ordering_path));
    ranks = ordering->to_ranks();
  } else if (!ranks_path.empty()) {
    ranks = ranks_from(read_json(ranks_path));
    ordering = LayeredOrdering::from_ranks(*ranks);
  } else if (source) {
    const BfsLayering bfs = layered_bfs(g, *source);
    g = remove_same_layer_edges(g, bfs.ranks);
    ordering = bfs.ordering;
    ranks = bfs.ranks;
  } else {
    throw InfeasibleError("metrics needs --ordering, --ranks or --source");
  }
  Json j;
  if (crossings) {
    const CrossingReport report = count_crossings_total(*ordering, g);
    j["crossings"] = report.total;
    Json gaps = Json::array();
    for (const auto& [gap, n] : report.per_gap) gaps.push_back({{"gap", gap}, {"crossings", n}});
    j["per_gap"] = gaps;
  }
  if (edge_length) {
    j["edge_length"] = total_edge_length(*ranks, g);
    j["edges"] = g.edge_count();
  }
  out << dump(j);
  return kOk;
}

int cmd_score(const std::string& input, const std::string& out_path, std::ostream& out) {
  const auto records = read_records(input);
  std::vector<ExperimentRecord> scored;
  scored.reserve(records.size());
  for (const auto& r : records) scored.push_back(rescore(r));
  write_records(scored, out_path);
  std::size_t correct = 0;
  for (const auto& r : scored) correct += r.outcome.kind == OutcomeKind::Correct;
  out << fmt::format("{} records scored ({} Correct) -> {}\n", scored.size(), correct, out_path);
  return kOk;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_dir, std::ostream& out) {
  std::vector<ExperimentRecord> records;
  for (const auto& in : inputs) {
    auto more = read_records(in);
    records.insert(records.end(), more.begin(), more.end());
  }
  const Report report = build_report(records);
  for (const auto& path : write_report(report, out_dir)) out << path << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layered graph drawing toolkit and LLM prompt harness", "layerlab"};
  app.require_subcommand(1);
  std::function<int()> action;

  // convert
  std::string conv_in, conv_from, conv_to, conv_out;
  bool conv_lossy = false;
  auto* convert = app.add_subcommand("convert", "Convert a graph file to another format");
  convert->add_option("input", conv_in, "Input graph")->required();
  convert->add_option("--from", conv_from, "Input format (default: from extension)");
  convert->add_option("--format", conv_to, "Output format: graphml, edgelist, json, dot")->required();
  convert->add_option("--out", conv_out, "Output path")->required();
  convert->add_flag("--allow-lossy", conv_lossy, "Drop attributes the target format cannot hold");
  convert->callback([&] {
    action = [&] {
      const Graph g = load_graph(conv_in, conv_from);
      spit(conv_out, emit_graph(g, parse_graph_format(conv_to), {conv_lossy}));
      return static_cast<int>(kOk);
    };
  });

  // generate
  std::size_t gen_n = 10, gen_m = 12;
  std::uint64_t gen_seed = 0;
  bool gen_connected = false, gen_directed = false, gen_multi = false;
  std::string gen_from, gen_to, gen_format = "json", gen_out;
  std::optional<double> gen_min_weight;
  auto* generate = app.add_subcommand("generate", "Generate a seeded random graph");
  generate->add_option("--nodes", gen_n, "Node count")->capture_default_str();
  generate->add_option("--edges", gen_m, "Edge count")->capture_default_str();
  generate->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  generate->add_flag("--connected", gen_connected, "Require a connected graph");
  generate->add_flag("--directed", gen_directed, "Emit a directed graph");
  generate->add_flag("--multi", gen_multi, "Allow parallel edges");
  generate->add_option("--date-from", gen_from, "First timestamp, YYYY-MM-DD");
  generate->add_option("--date-to", gen_to, "Last timestamp, YYYY-MM-DD");
  generate->add_option("--min-weight", gen_min_weight, "Weights drawn above this bound");
  generate->add_option("--format", gen_format, "Output format")->capture_default_str();
  generate->add_option("--out", gen_out, "Output path")->required();
  generate->callback([&] {
    action = [&] {
      GeneratorOptions o;
      o.simple = !gen_multi;
      o.connected = gen_connected;
      o.directed = gen_directed;
      o.weight_lower_bound = gen_min_weight;
      if (gen_from.empty() != gen_to.empty()) {
        throw InfeasibleError("--date-from and --date-to go together");
      }
      if (!gen_from.empty()) {
        auto first = parse_date(gen_from), last = parse_date(gen_to);
        if (!first || !last) throw ParseError("dates must be YYYY-MM-DD");
        o.timestamps = DateRange{*first, *last};
      }
      const Graph g = generate_random_graph(gen_n, gen_m, o, gen_seed);
      spit(gen_out, emit_graph(g, parse_graph_format(gen_format)));
      return static_cast<int>(kOk);
    };
  });

  // layout
  std::string lay_in, lay_format, lay_out;
  NodeId lay_source = 0;
  int lay_passes = 1;
  auto* layout = app.add_subcommand("layout", "BFS layering, pruning, median sweep and SVG");
  layout->add_option("input", lay_in, "Input graph")->required();
  layout->add_option("--format", lay_format, "Input format (default: from extension)");
  layout->add_option("--source", lay_source, "Source node")->capture_default_str();
  layout->add_option("--passes", lay_passes, "Median sweep passes")->capture_default_str();
  layout->add_option("--out", lay_out, "Output directory")->required();
  layout->callback([&] {
    action = [&] { return cmd_layout(lay_in, lay_format, lay_source, lay_passes, lay_out, out); };
  });

  // metrics
  std::string met_in, met_format, met_ordering, met_ranks;
  std::optional<NodeId> met_source;
  bool met_crossings = false, met_length = false;
  auto* metrics = app.add_subcommand("metrics", "Crossings and total edge length of a layering");
  metrics->add_option("input", met_in, "Input graph")->required();
  metrics->add_option("--format", met_format, "Input format (default: from extension)");
  metrics->add_option("--ordering", met_ordering, "Ordering JSON ({\"layers\": [[...], ...]})");
  metrics->add_option("--ranks", met_ranks, "Ranks JSON as written by layout");
  metrics->add_option("--source", met_source, "Use the pruned BFS layering from this source");
  metrics->add_flag("--crossings", met_crossings, "Report crossings");
  metrics->add_flag("--edge-length", met_length, "Report total edge length");
  metrics->callback([&] {
    action = [&] {
      return cmd_metrics(met_in, met_format, met_ordering, met_ranks, met_source, met_crossings,
                         met_length, out);
    };
  });

  // prompts
  PromptArgs pa;
  auto* prompts = app.add_subcommand("prompts", "Build prompt specs for a set of graphs");
  prompts->add_option("inputs", pa.inputs, "Graph files or directories")->required();
  prompts->add_option("--format", pa.format, "Input format (default: from extension)");
  prompts->add_option("--task", pa.task, "Task name, e.g. count-crossings")
      ->check(CLI::IsMember(task_names()))
      ->capture_default_str();
  prompts->add_option("--strategy", pa.strategy, "standard, steps or icl")
      ->check(CLI::IsMember({"standard", "steps", "icl"}))
      ->capture_default_str();
  prompts->add_option("--icl-k", pa.icl_k, "ICL example count")
      ->check(CLI::Range(3, 5))
      ->capture_default_str();
  prompts->add_option("--seed", pa.seed, "Sampling seed")->capture_default_str();
  prompts->add_option("--source", pa.source, "Source node for layered tasks")->capture_default_str();
  prompts->add_option("--min-nodes", pa.min_nodes, "Skip graphs with fewer nodes")->capture_default_str();
  prompts->add_option("--max-nodes", pa.max_nodes, "Skip graphs with more nodes")->capture_default_str();
  prompts->add_option("--edge-layering", pa.edge_layering, "edge-length layering: bfs or random")
      ->check(CLI::IsMember({"bfs", "random"}))
      ->capture_default_str();
  prompts->add_option("--num-layers", pa.num_layers, "Layers for random layerings")->capture_default_str();
  prompts->add_option("--from-format", pa.from_format, "format-conversion source format")
      ->capture_default_str();
  prompts->add_option("--to-format", pa.to_format, "format-conversion target format")
      ->capture_default_str();
  prompts->add_option("--property", pa.property, "bulbaceous or flamboyous")
      ->check(CLI::IsMember({"bulbaceous", "flamboyous"}))
      ->capture_default_str();
  prompts->add_option("--max-chars", pa.max_chars, "Prompt size ceiling")->capture_default_str();
  prompts->add_option("--out", pa.out, "Output JSONL")->required();
  prompts->callback([&] { action = [&] { return cmd_prompts(pa, out, err); }; });

  // run
  RunArgs ra;
  auto* runc = app.add_subcommand("run", "Send prompt specs to a responder");
  runc->add_option("specs", ra.specs, "Prompt spec JSONL")->required();
  runc->add_option("--responder", ra.responder, "http, oracle, noisy or replay")
      ->check(CLI::IsMember({"http", "oracle", "noisy", "replay"}))
      ->capture_default_str();
  runc->add_option("--noise-rate", ra.noise_rate, "Noisy responder error rate")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  runc->add_option("--seed", ra.seed, "Noisy responder seed")->capture_default_str();
  runc->add_option("--replay", ra.replay, "Transcript to replay");
  runc->add_option("--endpoint", ra.endpoint, "Base URL of the chat-completions server");
  runc->add_option("--config", ra.config, "HTTP config JSON");
  runc->add_option("--model", ra.model, "Model id")->capture_default_str();
  runc->add_option("--max-concurrency", ra.max_concurrency, "Requests in flight")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  runc->add_option("--out", ra.out, "Transcript JSONL")->required();
  runc->callback([&] { action = [&] { return cmd_run(ra, out, err); }; });

  // score
  std::string sc_in, sc_out;
  auto* scorec = app.add_subcommand("score", "Re-parse and re-score a transcript");
  scorec->add_option("transcript", sc_in, "Transcript JSONL")->required();
  scorec->add_option("--out", sc_out, "Scored JSONL")->required();
  scorec->callback([&] { action = [&] { return cmd_score(sc_in, sc_out, out); }; });

  // report
  std::vector<std::string> rep_in;
  std::string rep_out;
  auto* report = app.add_subcommand("report", "CSV tables and SVG histograms");
  report->add_option("records", rep_in, "Scored JSONL files")->required();
  report->add_option("--out", rep_out, "Output directory")->required();
  report->callback([&] { action = [&] { return cmd_report(rep_in, rep_out, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const TransportError& e) {
    err << "error: " << e.what() << "\n";
    return kTransport;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace layerlab::cli
