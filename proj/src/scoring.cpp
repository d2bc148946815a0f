#include "layerlab/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "layerlab/errors.hpp"

namespace layerlab {

namespace {

ScoreOutcome partial(double ratio) {
  ScoreOutcome out;
  out.kind = OutcomeKind::PartialRatio;
  out.ratio = ratio;
  return out;
}

ScoreOutcome correct_or_partial(double ratio, bool correct) {
  if (correct) {
    ScoreOutcome out;
    out.kind = OutcomeKind::Correct;
    out.ratio = 1.0;
    return out;
  }
  return partial(ratio);
}

ScoreOutcome compare_numbers(long parsed, long truth) {
  ScoreOutcome out;
  out.abs_error = std::labs(parsed - truth);
  out.kind = parsed == truth  ? OutcomeKind::Correct
             : parsed > truth ? OutcomeKind::IncorrectOver
                              : OutcomeKind::IncorrectUnder;
  return out;
}

template <class T, class V>
const T& expect(const V& value, TaskKind task, std::string_view what) {
  if (auto* p = std::get_if<T>(&value)) return *p;
  throw ScoreTypeError(fmt::format("{} does not match task {}", what, to_string(task)));
}

ScoreOutcome score_layering(const LayeringAnswer& parsed, const LayeringTruth& truth) {
  const Graph& g = truth.graph;
  std::size_t hits = 0;
  const std::set<NodeId> claimed_unreachable(parsed.unreachable.begin(), parsed.unreachable.end());
  for (const Node& n : g.nodes()) {
    auto p = parsed.ranks.find(n.id);
    if (truth.ranks.covers(n.id)) {
      if (p != parsed.ranks.end() && p->second == truth.ranks.rank_of(n.id)) ++hits;
    } else if (claimed_unreachable.count(n.id)) {
      ++hits;
    }
  }
  ScoreOutcome out = partial(g.empty() ? 1.0 : static_cast<double>(hits) / g.node_count());
  RankAssignment claimed;
  claimed.source = truth.ranks.source;
  claimed.ranks = parsed.ranks;
  claimed.unreachable = parsed.unreachable;
  for (const auto& [id, r] : parsed.ranks) {
    if (!g.contains(id)) out.warnings.push_back(fmt::format("unknown node {}", id));
  }
  out.valid = truth.ranks.source && is_valid_layering(g, claimed, *truth.ranks.source);
  const bool covers_edges = std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
    return claimed.covers(e.source) && claimed.covers(e.target);
  });
  if (covers_edges) {
    const Graph pruned = remove_same_layer_edges(g, claimed);
    out.minimal_length =
        total_edge_length(claimed, pruned) == static_cast<long>(pruned.edge_count());
  } else {
    out.minimal_length = false;
  }
  return out;
}

bool same_partition(const LayeredOrdering& a, const LayeredOrdering& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    auto x = a.layers[i], y = b.layers[i];
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return false;
  }
  return true;
}

ScoreOutcome score_ordering(const LayeredOrdering& parsed, const SortTruth& truth) {
  if (!same_partition(parsed, truth.input)) {
    ScoreOutcome out;
    out.kind = OutcomeKind::Malformed;
    out.reason = std::string(reason::kNonPermutation);
    out.detail = "layers are not permutations of the input layers";
    return out;
  }
  ScoreOutcome out;
  out.kind = OutcomeKind::OrderingDelta;
  out.crossings_before = count_crossings_total(truth.input, truth.graph).total;
  out.crossings_after = count_crossings_total(parsed, truth.graph).total;
  out.delta = *out.crossings_after < *out.crossings_before    ? Delta::Fewer
              : *out.crossings_after == *out.crossings_before ? Delta::Equal
                                                              : Delta::More;
  out.matches_oracle = parsed == truth.oracle;
  return out;
}

ScoreOutcome score_generation(const Graph& g, const GenerationTruth& truth) {
  const auto& req = truth.request;
  int checks = 2, passed = 0;
  std::vector<std::string> failures;
  if (g.node_count() == req.nodes) ++passed;
  else failures.push_back(fmt::format("{} nodes instead of {}", g.node_count(), req.nodes));
  if (g.edge_count() == req.edges) ++passed;
  else failures.push_back(fmt::format("{} edges instead of {}", g.edge_count(), req.edges));
  if (req.timestamps) {
    ++checks;
    const auto first = std::chrono::sys_days(req.timestamps->first);
    const auto last = std::chrono::sys_days(req.timestamps->last);
    const bool ok = std::all_of(g.nodes().begin(), g.nodes().end(), [&](const Node& n) {
      return n.timestamp && std::chrono::sys_days(*n.timestamp) >= first &&
             std::chrono::sys_days(*n.timestamp) <= last;
    });
    if (ok) ++passed;
    else failures.push_back("timestamp missing or out of range");
  }
  if (req.min_weight) {
    ++checks;
    const bool ok = std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) {
      return e.weight && *e.weight > *req.min_weight;
    });
    if (ok) ++passed;
    else failures.push_back("weight missing or not above the bound");
  }
  ScoreOutcome out = correct_or_partial(static_cast<double>(passed) / checks, passed == checks);
  out.warnings = std::move(failures);
  return out;
}

using PairKey = std::pair<std::string, std::string>;

PairKey key(const std::string& a, const std::string& b, bool ordered) {
  if (ordered || a <= b) return {a, b};
  return {b, a};
}

std::multiset<PairKey> edge_keys(const Graph& g, bool ordered, bool by_name) {
  std::multiset<PairKey> out;
  for (const Edge& e : g.edges()) {
    const auto a = by_name ? g.name(e.source) : std::to_string(e.source);
    const auto b = by_name ? g.name(e.target) : std::to_string(e.target);
    out.insert(key(a, b, ordered));
  }
  return out;
}

std::size_t matched(const std::multiset<PairKey>& truth, std::multiset<PairKey> parsed) {
  std::size_t hits = 0;
  for (const auto& k : truth) {
    auto it = parsed.find(k);
    if (it != parsed.end()) {
      ++hits;
      parsed.erase(it);
    }
  }
  return hits;
}

ScoreOutcome score_conversion(const ConvertedGraph& parsed, const ConversionTruth& truth) {
  const bool ordered = parsed.graph.directed() && truth.graph.directed();
  const auto want = edge_keys(truth.graph, ordered, false);
  const auto got = edge_keys(parsed.graph, ordered, false);
  std::set<NodeId> want_nodes, got_nodes;
  for (const Node& n : truth.graph.nodes()) want_nodes.insert(n.id);
  for (const Node& n : parsed.graph.nodes()) got_nodes.insert(n.id);
  const bool same = want == got && want_nodes == got_nodes;
  const double ratio = want.empty() ? (want_nodes == got_nodes ? 1.0 : 0.0)
                                    : static_cast<double>(matched(want, got)) / want.size();
  ScoreOutcome out = correct_or_partial(ratio, same && parsed.format == truth.to);
  if (parsed.format != truth.to) {
    out.warnings.push_back(fmt::format("answer is {} instead of {}", to_string(parsed.format),
                                       to_string(truth.to)));
  }
  return out;
}

std::vector<std::string> sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    current += c;
    const bool end = c == '\n' || ((c == '.' || c == '!' || c == '?') &&
                                   (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]))));
    if (end) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

bool mentions(const std::string& sentence, const std::string& name) {
  for (std::size_t at = sentence.find(name); at != std::string::npos;
       at = sentence.find(name, at + 1)) {
    const bool left = at == 0 || !std::isalnum(static_cast<unsigned char>(sentence[at - 1]));
    const std::size_t end = at + name.size();
    const bool right = end == sentence.size() || !std::isalnum(static_cast<unsigned char>(sentence[end]));
    if (left && right) return true;
  }
  return false;
}

ScoreOutcome score_scene_text(const SceneText& parsed, const SceneTruth& truth) {
  const Graph& g = truth.people;
  const auto parts = sentences(parsed.text);
  std::size_t hits = 0;
  std::vector<std::string> missing;
  for (const Edge& e : g.edges()) {
    const auto a = g.name(e.source), b = g.name(e.target);
    const bool found = std::any_of(parts.begin(), parts.end(), [&](const std::string& s) {
      return mentions(s, a) && mentions(s, b);
    });
    if (found) ++hits;
    else missing.push_back(fmt::format("{}-{}", a, b));
  }
  if (g.edge_count() == 0) {
    const bool all = std::all_of(g.nodes().begin(), g.nodes().end(), [&](const Node& n) {
      return mentions(parsed.text, g.name(n.id));
    });
    return correct_or_partial(all ? 1.0 : 0.0, all);
  }
  ScoreOutcome out =
      correct_or_partial(static_cast<double>(hits) / g.edge_count(), hits == g.edge_count());
  for (const auto& m : missing) out.warnings.push_back("no sentence joins " + m);
  return out;
}

ScoreOutcome score_svg(const SvgSummary& parsed, const SvgTruth& truth) {
  int passed = 0;
  std::vector<std::string> notes;
  if (parsed.node_elements == truth.nodes) ++passed;
  else notes.push_back(fmt::format("{} node shapes for {} nodes", parsed.node_elements, truth.nodes));
  if (parsed.edge_elements >= truth.edges) ++passed;
  else notes.push_back(fmt::format("{} edge shapes for {} edges", parsed.edge_elements, truth.edges));
  ScoreOutcome out = correct_or_partial(passed / 2.0, passed == 2);
  out.warnings = std::move(notes);
  if (const auto triples = count_collinear_triples(parsed.node_centres)) {
    out.warnings.push_back(fmt::format("{} collinear node triples", triples));
  }
  return out;
}

}  // namespace

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Correct: return "Correct";
    case OutcomeKind::IncorrectOver: return "IncorrectOver";
    case OutcomeKind::IncorrectUnder: return "IncorrectUnder";
    case OutcomeKind::Malformed: return "Malformed";
    case OutcomeKind::PartialRatio: return "PartialRatio";
    case OutcomeKind::OrderingDelta: return "OrderingDelta";
  }
  return "";
}

std::string_view to_string(Delta delta) {
  switch (delta) {
    case Delta::Fewer: return "fewer";
    case Delta::Equal: return "equal";
    case Delta::More: return "more";
  }
  return "";
}

std::string ScoreOutcome::bucket() const {
  if (kind == OutcomeKind::OrderingDelta && delta) return std::string(to_string(*delta));
  if (kind == OutcomeKind::PartialRatio) {
    return fmt::format("{:.1f}", std::floor(ratio * 10.0 + 1e-9) / 10.0);
  }
  return std::string(to_string(kind));
}

std::vector<std::string> bucket_order(TaskKind task) {
  std::vector<std::string> ratios;
  for (int i = 0; i <= 10; ++i) ratios.push_back(fmt::format("{:.1f}", i / 10.0));
  switch (task) {
    case TaskKind::LayerAssignment:
      ratios.push_back("Malformed");
      return ratios;
    case TaskKind::SortLayers: return {"fewer", "equal", "more", "Malformed"};
    case TaskKind::CountCrossings:
    case TaskKind::EdgeLength:
    case TaskKind::PropertyCheck: return {"Correct", "IncorrectOver", "IncorrectUnder", "Malformed"};
    default: {
      std::vector<std::string> out{"Correct"};
      out.insert(out.end(), ratios.begin(), ratios.end());
      out.push_back("Malformed");
      return out;
    }
  }
}

Truth truth_for(const TaskInstance& instance) {
  return std::visit(
      [&](const auto& t) -> Truth {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LayerAssignmentTask>) {
          return LayeringTruth{t.graph, assign_layers_bfs(t.graph, t.source)};
        } else if constexpr (std::is_same_v<T, SortLayersTask>) {
          return SortTruth{t.graph, t.input, oracle_ordering(t)};
        } else if constexpr (std::is_same_v<T, CountCrossingsTask>) {
          return count_crossings_bipartite(t.a, t.b, t.edges).count;
        } else if constexpr (std::is_same_v<T, EdgeLengthTask>) {
          return total_edge_length(t.layers.to_ranks(), t.graph);
        } else if constexpr (std::is_same_v<T, GraphGenerationTask>) {
          return GenerationTruth{t};
        } else if constexpr (std::is_same_v<T, FormatConversionTask>) {
          return ConversionTruth{t.to, t.graph};
        } else if constexpr (std::is_same_v<T, PropertyCheckTask>) {
          return t.property == GraphProperty::Bulbaceous ? is_bulbaceous(t.graph)
                                                         : is_flamboyous(t.graph);
        } else if constexpr (std::is_same_v<T, GraphFromSceneTask>) {
          return t.truth;
        } else if constexpr (std::is_same_v<T, SceneFromGraphTask>) {
          return SceneTruth{t.graph};
        } else {
          return SvgTruth{t.graph.node_count(), t.graph.edge_count()};
        }
      },
      instance.payload);
}

ScoreOutcome score(TaskKind task, const Parsed& parsed, const Truth& truth) {
  if (auto* m = std::get_if<Malformed>(&parsed)) {
    ScoreOutcome out;
    out.kind = OutcomeKind::Malformed;
    out.reason = m->reason;
    out.detail = m->detail;
    return out;
  }
  switch (task) {
    case TaskKind::LayerAssignment:
      return score_layering(expect<LayeringAnswer>(parsed, task, "answer"),
                            expect<LayeringTruth>(truth, task, "truth"));
    case TaskKind::SortLayers:
      return score_ordering(expect<LayeredOrdering>(parsed, task, "answer"),
                            expect<SortTruth>(truth, task, "truth"));
    case TaskKind::CountCrossings:
    case TaskKind::EdgeLength:
      return compare_numbers(expect<long>(parsed, task, "answer"), expect<long>(truth, task, "truth"));
    case TaskKind::PropertyCheck:
      return compare_numbers(expect<bool>(parsed, task, "answer") ? 1 : 0,
                             expect<bool>(truth, task, "truth") ? 1 : 0);
    case TaskKind::GraphGeneration:
      return score_generation(expect<Graph>(parsed, task, "answer"),
                              expect<GenerationTruth>(truth, task, "truth"));
    case TaskKind::FormatConversion:
      return score_conversion(expect<ConvertedGraph>(parsed, task, "answer"),
                              expect<ConversionTruth>(truth, task, "truth"));
    case TaskKind::GraphFromScene:
      return score_scene_graph(expect<Graph>(parsed, task, "answer"),
                               expect<Graph>(truth, task, "truth"));
    case TaskKind::SceneFromGraph:
      return score_scene_text(expect<SceneText>(parsed, task, "answer"),
                              expect<SceneTruth>(truth, task, "truth"));
    case TaskKind::SvgFromDot:
      return score_svg(expect<SvgSummary>(parsed, task, "answer"),
                       expect<SvgTruth>(truth, task, "truth"));
  }
  throw ScoreTypeError("unknown task");
}

ScoreOutcome score_scene_graph(const Graph& parsed, const Graph& truth) {
  // Undirected simple topology: duplicates and direction collapse.
  auto simple = [](const Graph& g) {
    std::set<PairKey> out;
    for (const Edge& e : g.edges()) out.insert(key(g.name(e.source), g.name(e.target), false));
    return out;
  };
  auto names = [](const Graph& g) {
    std::set<std::string> out;
    for (const Node& n : g.nodes()) out.insert(g.name(n.id));
    return out;
  };
  const auto want = simple(truth), got = simple(parsed);
  std::size_t hits = 0;
  for (const auto& k : want) hits += got.count(k);
  const bool same = want == got && names(truth) == names(parsed);
  const double ratio = want.empty() ? (same ? 1.0 : 0.0) : static_cast<double>(hits) / want.size();
  ScoreOutcome out = correct_or_partial(ratio, same);
  for (const auto& k : got) {
    if (!want.count(k)) out.warnings.push_back(fmt::format("extra edge {}-{}", k.first, k.second));
  }
  return out;
}

}  // namespace layerlab
