// One PASS/FAIL line per acceptance criterion. Exit status is non-zero if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "layerlab/errors.hpp"
#include "fuzz.hpp"
#include "oracles.hpp"

using namespace layerlab;
using namespace fixtures;

namespace {

// Tolerances and budgets.
constexpr double kCrossingBudgetSeconds = 10.0;
constexpr double kBfsBudgetSeconds = 5.0;
constexpr int kRandomGaps = 1000;
constexpr int kMaxSide = 12;
constexpr int kStandInGraphs = 200;
constexpr int kSweepGraphs = 500;
constexpr std::size_t kClosureSpecs = 100;
constexpr double kNoiseRate = 0.3;
constexpr std::uint64_t kNoiseSeed = 20230213;
constexpr std::size_t kFuzzCases = 10000;
constexpr int kIclPrompts = 1000;
constexpr int kRoundTripGraphs = 200;
constexpr int kGeneratorSeeds = 100;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Check crossing_oracle() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  long cases = 0;
  for (int na = 1; na <= 4; ++na) {
    for (int nb = 1; nb <= 4; ++nb) {
      std::vector<NodeId> ids(na + nb);
      for (int i = 0; i < na + nb; ++i) ids[i] = static_cast<NodeId>(i);
      std::vector<int> pick;
      std::function<void(int)> rec = [&](int from) {
        const std::vector<NodeId> a(ids.begin(), ids.begin() + na), b(ids.begin() + na, ids.end());
        std::vector<Edge> es;
        for (std::size_t i = 0; i < pick.size(); ++i) {
          const NodeId s = a[pick[i] / nb], t = b[pick[i] % nb];
          es.push_back(i % 2 ? Edge{t, s, std::nullopt} : Edge{s, t, std::nullopt});
        }
        const long fast = count_crossings_bipartite(a, b, es).count;
        const long slow = oracles::brute_force_crossings(a, b, es);
        c.expect(fast == slow, fmt::format("exhaustive case {}: {} vs {}", cases, fast, slow));
        ++cases;
        if (pick.size() == 5) return;
        for (int s = from; s < na * nb; ++s) {
          pick.push_back(s);
          rec(s);
          pick.pop_back();
        }
      };
      rec(0);
    }
  }
  std::mt19937_64 rng(1);
  for (int i = 0; i < kRandomGaps; ++i) {
    const auto g = oracles::random_gap(rng, kMaxSide, 60);
    const long fast = count_crossings_bipartite(g.a, g.b, g.edges).count;
    c.expect(fast == oracles::brute_force_crossings(g.a, g.b, g.edges), fmt::format("random gap {}", i));
  }
  const double s = seconds_since(t0);
  c.expect(s < kCrossingBudgetSeconds, fmt::format("took {:.2f}s", s));
  if (c.ok) c.detail = fmt::format("{} exhaustive + {} random instances, {:.2f}s", cases, kRandomGaps, s);
  return c;
}

Check reference_crossings() {
  Check c;
  const auto icl = crossing_examples()[2];
  const auto q = crossing_query();
  const long a = count_crossings_bipartite(icl.a, icl.b, icl.edges).count;
  const long b = count_crossings_bipartite(q.a, q.b, q.edges).count;
  c.expect(a == 3, fmt::format("ICL instance gave {}", a));
  c.expect(b == 1, fmt::format("standard instance gave {}", b));
  if (c.ok) c.detail = "ICL instance 3, standard instance 1";
  return c;
}

Check reference_edge_lengths() {
  Check c;
  const auto pool = length_examples()[2];
  const auto q = length_query();
  const long a = total_edge_length(pool.layers.to_ranks(), pool.graph);
  const long b = total_edge_length(q.layers.to_ranks(), q.graph);
  c.expect(a == 23, fmt::format("pool instance gave {}", a));
  c.expect(b == 20, fmt::format("main instance gave {}", b));
  const TaskInstance inst{"q", q};
  const std::pair<const char*, OutcomeKind> recorded[] = {
      {"30", OutcomeKind::IncorrectOver}, {"18", OutcomeKind::IncorrectUnder}, {"15", OutcomeKind::IncorrectUnder}};
  for (const auto& [answer, want] : recorded) {
    const auto out = score(TaskKind::EdgeLength, parse_response(TaskKind::EdgeLength, answer), truth_for(inst));
    c.expect(out.kind == want, fmt::format("answer {} scored {}", answer, to_string(out.kind)));
  }
  if (c.ok) c.detail = "pool 23, main 20; answers 30/18/15 -> Over/Under/Under";
  return c;
}

Check bfs_law() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  long edges = 0;
  for (int i = 0; i < kStandInGraphs; ++i) {
    const std::size_t n = 10 + i % 2;
    const std::size_t m = n - 1 + i % 9;
    const Graph g = generate_random_graph(n, m, {.connected = true}, 1000 + i);
    const auto r = assign_layers_bfs(g, 0);
    const Graph pruned = remove_same_layer_edges(g, r);
    for (const auto& e : pruned.edges()) {
      c.expect(std::abs(r.rank_of(e.source) - r.rank_of(e.target)) == 1, fmt::format("graph {}: long edge", i));
    }
    c.expect(total_edge_length(r, pruned) == static_cast<long>(pruned.edge_count()),
             fmt::format("graph {}: total length != |E'|", i));
    edges += static_cast<long>(pruned.edge_count());
  }
  const double s = seconds_since(t0);
  c.expect(s < kBfsBudgetSeconds, fmt::format("took {:.2f}s", s));
  if (c.ok) c.detail = fmt::format("{} seeded stand-in graphs (no corpus), {} edges, {:.3f}s", kStandInGraphs, edges, s);
  return c;
}

Check median_reproduction() {
  Check c;
  const auto inst = median_short();
  const auto swept = median_sweep(inst.input, inst.graph, 1);
  c.expect(swept.layers[1] == std::vector<NodeId>{3, 1}, "layer 1 is not [3, 1]");
  const long before = count_crossings_total(inst.input, inst.graph).total;
  const long after = count_crossings_total(swept, inst.graph).total;
  c.expect(before == 7, fmt::format("input crossings {}", before));
  c.expect(after == 3, fmt::format("swept crossings {}", after));
  std::mt19937_64 rng(3);
  for (int i = 0; i < kSweepGraphs; ++i) {
    const auto g = oracles::random_layered(rng, 6, 6, 25);
    const auto out = median_sweep(g.ordering, g.graph, 1);
    bool perm = out.layers.size() == g.ordering.layers.size();
    for (std::size_t l = 0; perm && l < out.layers.size(); ++l) {
      perm = std::is_permutation(out.layers[l].begin(), out.layers[l].end(), g.ordering.layers[l].begin(),
                                 g.ordering.layers[l].end());
    }
    c.expect(perm, fmt::format("random graph {} not permuted", i));
  }
  if (c.ok) c.detail = fmt::format("layer 1 [3, 1], crossings 7 -> 3, {} permutation checks", kSweepGraphs);
  return c;
}

/// Exactly `count` numeric-task specs drawn from seeded 10/11-node graphs
/// across all strategies.
std::vector<PromptSpec> numeric_specs(std::size_t count) {
  std::vector<TaskInstance> crossings, lengths;
  for (std::uint64_t i = 0; i < 12; ++i) {
    const Graph g = generate_random_graph(10 + i % 2, 14, {.connected = true}, 500 + i);
    const std::string id = fmt::format("g{}", i);
    for (auto& gap : make_count_crossings(id, g, 0)) crossings.push_back(gap);
    lengths.push_back(make_edge_length(id, g, 0, EdgeLayering::Bfs));
    lengths.push_back(make_edge_length(id + "r", g, 0, EdgeLayering::Random, 6, i));
  }
  const Strategy strategies[] = {Strategy::standard(), Strategy::steps(), Strategy::icl(3), Strategy::icl(4),
                                 Strategy::icl(5)};
  std::vector<PromptSpec> out;
  for (std::size_t i = 0; out.size() < count; ++i) {
    const auto& pool = i % 2 ? lengths : crossings;
    const auto& inst = pool[(i / 2) % pool.size()];
    const Strategy s = strategies[(i / 2 / pool.size() + i) % 5];
    PromptSpec spec = build_prompt(inst, s, pool, i);
    if (std::none_of(out.begin(), out.end(), [&](const PromptSpec& p) { return p.id == spec.id; })) {
      out.push_back(std::move(spec));
    }
  }
  return out;
}

std::vector<std::string> outcome_vector(const std::vector<ExperimentRecord>& records) {
  std::vector<std::string> v;
  for (const auto& r : records) v.push_back(outcome_to_json(r.outcome).dump());
  return v;
}

Check oracle_closure() {
  Check c;
  const auto specs = numeric_specs(kClosureSpecs);
  c.expect(specs.size() == kClosureSpecs, "spec count");
  OracleResponder oracle(specs);
  const auto records = run_experiment(specs, oracle, nullptr, {.max_concurrency = 4});
  long correct = 0;
  for (const auto& r : records) correct += r.outcome.kind == OutcomeKind::Correct;
  c.expect(correct == static_cast<long>(specs.size()), fmt::format("{}/{} Correct", correct, specs.size()));
  if (c.ok) c.detail = fmt::format("{}/{} Correct", correct, specs.size());
  return c;
}

Check noise_determinism() {
  Check c;
  const auto specs = numeric_specs(kClosureSpecs);
  NoisyResponder a(specs, kNoiseRate, kNoiseSeed), b(specs, kNoiseRate, kNoiseSeed);
  const auto first = run_experiment(specs, a, nullptr, {.max_concurrency = 3});
  const auto second = run_experiment(specs, b, nullptr, {.max_concurrency = 7});
  c.expect(outcome_vector(first) == outcome_vector(second), "noisy runs differ");
  long wrong = 0;
  for (const auto& r : first) wrong += r.outcome.kind != OutcomeKind::Correct;
  c.expect(wrong > 0, "rate 0.3 produced no errors");
  NoisyResponder zero(specs, 0.0, kNoiseSeed);
  OracleResponder oracle(specs);
  c.expect(outcome_vector(run_experiment(specs, zero, nullptr)) == outcome_vector(run_experiment(specs, oracle, nullptr)),
           "rate 0 differs from the oracle");
  if (c.ok) c.detail = fmt::format("{} specs, {} perturbed, identical across runs; rate 0 == oracle", specs.size(), wrong);
  return c;
}

Check parser_robustness() {
  Check c;
  const auto corpus = fuzz::make_corpus(kFuzzCases, 424242);
  std::size_t malformed = 0;
  for (const auto& input : corpus.inputs) {
    for (TaskKind task : kAllTasks) {
      Parsed p;
      try {
        p = parse_response(task, input);
      } catch (...) {
        c.expect(false, fmt::format("{} threw", to_string(task)));
        continue;
      }
      c.expect(fuzz::classified(task, p), fmt::format("{}: unclassified result", to_string(task)));
      malformed += std::holds_alternative<Malformed>(p);
    }
  }
  for (const auto& input : corpus.hostile) {
    for (TaskKind task : kAllTasks) {
      c.expect(std::holds_alternative<Malformed>(parse_response(task, input)),
               fmt::format("{}: non-conforming input accepted", to_string(task)));
    }
  }
  if (c.ok) {
    c.detail = fmt::format("{} inputs x {} tasks, {} Malformed, all classified", corpus.inputs.size(),
                           std::size(kAllTasks), malformed);
  }
  return c;
}

Check icl_contract() {
  Check c;
  std::vector<std::vector<TaskInstance>> pools(3);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const Graph g = generate_random_graph(10 + i % 2, 13, {.connected = true}, 900 + i);
    const std::string id = fmt::format("g{}", i);
    pools[0].push_back(make_layer_assignment(id, g, 0));
    pools[1].push_back(make_edge_length(id, g, 0, EdgeLayering::Random, 6, i));
    pools[2].push_back(make_sort_layers(id, g, 0));
  }
  for (auto& gap : make_count_crossings("h", generate_random_graph(11, 16, {.connected = true}, 77), 0)) {
    pools[1].push_back(gap);  // mixed pool: examples must still share the query's task
  }
  std::mt19937_64 rng(5);
  int checked = 0, skipped = 0;
  for (int i = 0; checked < kIclPrompts; ++i) {
    const auto& pool = pools[i % 3];
    const auto& query = pool[rng() % pool.size()];
    const int k = 3 + static_cast<int>(rng() % 3);
    PromptSpec spec;
    try {
      spec = build_prompt(query, Strategy::icl(k), pool, rng());
    } catch (const InfeasibleError&) {
      ++skipped;  // crossing queries in the mixed pool have too few peers
      continue;
    }
    ++checked;
    c.expect(spec.strategy.k >= 3 && spec.strategy.k <= 5, "k out of range");
    c.expect(static_cast<int>(spec.icl_example_ids.size()) == k, "wrong example count");
    c.expect(std::find(spec.icl_example_ids.begin(), spec.icl_example_ids.end(), query.id) ==
                 spec.icl_example_ids.end(),
             fmt::format("prompt {} contains its own query", i));
    for (const auto& ex_id : spec.icl_example_ids) {
      const auto ex = std::find_if(pool.begin(), pool.end(), [&](const TaskInstance& t) { return t.id == ex_id; });
      c.expect(ex != pool.end() && ex->kind() == query.kind(), "example from another task");
      if (ex == pool.end()) continue;
      const std::string answer = oracle_answer(*ex, spec.strategy);
      c.expect(spec.text.find(answer) != std::string::npos, fmt::format("prompt {}: example {} answer missing", i, ex_id));
    }
  }
  if (c.ok) c.detail = fmt::format("{} prompts checked, {} infeasible draws refused", checked, skipped);
  return c;
}

Check format_round_trips() {
  Check c;
  const GraphFormat formats[] = {GraphFormat::GraphMLSubset, GraphFormat::EdgeListText, GraphFormat::JsonGraph,
                                 GraphFormat::DotSubset};
  auto keys = [](const Graph& g) {
    std::multiset<std::pair<NodeId, NodeId>> k;
    for (const auto& e : g.edges()) k.insert({e.source, e.target});
    return k;
  };
  auto ids = [](const Graph& g) {
    std::set<NodeId> s;
    for (const auto& n : g.nodes()) s.insert(n.id);
    return s;
  };
  for (int i = 0; i < kRoundTripGraphs; ++i) {
    GeneratorOptions o;
    o.simple = i % 4 != 0;
    o.directed = i % 2 == 0;
    o.first_id = static_cast<NodeId>(i % 3);
    const std::size_t n = 2 + i % 11;
    const std::size_t m = o.simple ? std::min<std::size_t>(i % 19, n * (n - 1) / 2) : i % 19;
    const Graph g = generate_random_graph(n, m, o, 7000 + i);
    for (auto f : formats) {
      try {
        const Graph back = parse_graph(emit_graph(g, f), f);
        c.expect(ids(back) == ids(g) && keys(back) == keys(g), fmt::format("graph {} via {}", i, to_string(f)));
      } catch (const std::exception& e) {
        c.expect(false, fmt::format("graph {} via {}: {}", i, to_string(f), e.what()));
      }
    }
  }
  const DateRange range{*parse_date("1970-01-01"), *parse_date("1970-12-31")};
  for (int s = 0; s < kGeneratorSeeds; ++s) {
    const GraphGenerationTask req{5 + static_cast<std::size_t>(s % 7), 7 + static_cast<std::size_t>(s % 5), range,
                                  2.0};
    const Graph g = oracle_generated_graph(req, s);
    const TaskInstance inst{"gen", req};
    const auto out = score(TaskKind::GraphGeneration, Parsed{g}, truth_for(inst));
    c.expect(out.kind == OutcomeKind::Correct, fmt::format("generator seed {} misses a constraint", s));
  }
  if (c.ok) c.detail = fmt::format("{} graphs x 4 formats; {} generator seeds", kRoundTripGraphs, kGeneratorSeeds);
  return c;
}

Check scene_equivalence() {
  Check c;
  const Parsed parsed = parse_response(TaskKind::GraphFromScene, read("answers/graph_from_scene_directed.txt"));
  const auto* g = std::get_if<Graph>(&parsed);
  c.expect(g != nullptr, "answer did not parse");
  if (g) {
    const auto out = score_scene_graph(*g, office_truth());
    c.expect(out.kind == OutcomeKind::Correct, fmt::format("scored {}", to_string(out.kind)));
  }
  if (c.ok) c.detail = "ground truth == answer as undirected simple graph";
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Check()>> criteria[] = {
      {"crossing-oracle equivalence", crossing_oracle},
      {"reference crossing instances", reference_crossings},
      {"edge-length instances", reference_edge_lengths},
      {"BFS layering law", bfs_law},
      {"median-sweep reproduction", median_reproduction},
      {"oracle closure", oracle_closure},
      {"seeded-noise determinism", noise_determinism},
      {"parser robustness", parser_robustness},
      {"ICL contract", icl_contract},
      {"format round-trips", format_round_trips},
      {"scene-graph equivalence", scene_equivalence},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = fmt::format("exception: {}", e.what());
    }
    failed += !c.ok;
    fmt::print("{} {:2d} {}: {}\n", c.ok ? "PASS" : "FAIL", n, name, c.detail);
    std::fflush(stdout);
  }
  fmt::print("{}/{} criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
