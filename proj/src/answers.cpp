#include "layerlab/answers.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <fmt/format.h>

#include "layerlab/errors.hpp"
#include "layerlab/prompts.hpp"

namespace layerlab {

namespace {

// ---------------------------------------------------------------- oracle

std::string fenced(std::string_view lang, std::string body) {
  if (!body.empty() && body.back() != '\n') body += '\n';
  return fmt::format("```{}\n{}```", lang, body);
}

std::string_view fence_language(GraphFormat f) {
  switch (f) {
    case GraphFormat::GraphMLSubset: return "xml";
    case GraphFormat::EdgeListText: return "text";
    case GraphFormat::JsonGraph: return "json";
    case GraphFormat::DotSubset: return "dot";
  }
  return "";
}

Graph drop_edge(const Graph& g, std::uint64_t noise) {
  if (g.edge_count() == 0) return g;
  std::vector<Edge> edges = g.edges();
  edges.erase(edges.begin() + static_cast<long>(noise % edges.size()));
  return g.with_edges(std::move(edges));
}

long shift(long truth, std::uint64_t noise) {
  if (truth == 0) return 1;
  return (noise & 1) ? truth + 1 : truth - 1;
}

std::string layer_text(const LayeredOrdering& o) {
  std::string out;
  for (std::size_t i = 0; i < o.layers.size(); ++i) {
    if (i) out += '\n';
    out += fmt::format("Layer {}: [{}]", i, fmt::join(o.layers[i], ", "));
  }
  return out;
}

std::string layer_assignment_answer(const LayerAssignmentTask& t, const Strategy& s,
                                    std::optional<std::uint64_t> noise) {
  const BfsLayering bfs = layered_bfs(t.graph, t.source);
  std::vector<std::pair<NodeId, int>> rows;
  for (std::size_t k = 0; k < bfs.ordering.layers.size(); ++k) {
    for (NodeId v : bfs.ordering.layers[k]) rows.emplace_back(v, static_cast<int>(k));
  }
  if (noise && rows.size() > 1) {
    rows[1 + *noise % (rows.size() - 1)].second += 1;
  }
  const char* sep = s.kind == Strategy::Kind::Steps ? ": " : " - ";
  auto block = [&](auto&& keep) {
    std::string out;
    for (const auto& [v, r] : rows) {
      if (keep(r)) out += fmt::format("{}{}{}\n", v, sep, r);
    }
    for (NodeId v : bfs.ranks.unreachable) out += fmt::format("{}{}unreachable\n", v, sep);
    return out;
  };
  if (s.kind != Strategy::Kind::Steps) {
    std::string out = block([](int) { return true; });
    out.pop_back();
    return out;
  }
  std::string out = fmt::format("Node {} belongs to layer 0.\n\n", t.source);
  int top = 0;
  for (const auto& row : rows) top = std::max(top, row.second);
  for (int k = 1; k <= top; ++k) {
    std::string layer;
    for (const auto& [v, r] : rows) {
      if (r == k) layer += fmt::format("{}: {}\n", v, r);
    }
    out += fmt::format("Layer {}:\n{}\n", k, fenced("", layer));
  }
  return out + "Final result:\n" + fenced("", block([](int) { return true; }));
}

std::string crossing_answer(const CountCrossingsTask& t, const Strategy& s,
                            std::optional<std::uint64_t> noise) {
  const bool want_pairs = s.kind != Strategy::Kind::Icl && !noise;
  const auto fragment = count_crossings_bipartite(t.a, t.b, t.edges, want_pairs);
  if (noise) return std::to_string(shift(fragment.count, *noise));
  if (s.kind == Strategy::Kind::Icl) return std::to_string(fragment.count);
  std::vector<std::string> lines;
  auto index = [](const std::vector<NodeId>& order, NodeId v) {
    return std::find(order.begin(), order.end(), v) - order.begin();
  };
  for (const auto& p : fragment.pairs) {
    std::string line = fmt::format("({}, {}) and ({}, {})", p.first.source, p.first.target,
                                   p.second.source, p.second.target);
    if (s.kind == Strategy::Kind::Steps) {
      line += fmt::format(" => s1 = {}, t1 = {}, s2 = {}, t2 = {}", index(t.a, p.first.source),
                          index(t.b, p.first.target), index(t.a, p.second.source),
                          index(t.b, p.second.target));
    }
    lines.push_back(std::move(line));
  }
  if (s.kind == Strategy::Kind::Standard) {
    return lines.empty() ? "[]" : fmt::format("{}", fmt::join(lines, "\n"));
  }
  std::string out = "Pairs of edges that cross:\n";
  for (const auto& l : lines) out += l + "\n";
  if (lines.empty()) out += "none\n";
  return out + "\nNumber of edges left:\n" + std::to_string(fragment.count);
}

std::string edge_length_answer(const EdgeLengthTask& t, const Strategy& s,
                               std::optional<std::uint64_t> noise) {
  const RankAssignment ranks = t.layers.to_ranks();
  const long total = total_edge_length(ranks, t.graph);
  if (noise) return std::to_string(shift(total, *noise));
  if (s.kind != Strategy::Kind::Steps) return std::to_string(total);
  std::string out;
  for (const Edge& e : t.graph.edges()) {
    out += fmt::format("({}, {}) -> Layer {} to Layer {}\n", e.source, e.target,
                       ranks.rank_of(e.source), ranks.rank_of(e.target));
  }
  out += '\n';
  for (const Edge& e : t.graph.edges()) {
    out += fmt::format("({}, {}) -> {}\n", e.source, e.target,
                       std::abs(ranks.rank_of(e.source) - ranks.rank_of(e.target)));
  }
  return out + fmt::format("\nTherefore, the final sum is {}.", total);
}

bool property_holds(const PropertyCheckTask& t) {
  return t.property == GraphProperty::Bulbaceous ? is_bulbaceous(t.graph)
                                                 : is_flamboyous(t.graph);
}

// ---------------------------------------------------------------- text scanning

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Small cursor over one line.
struct Scan {
  std::string_view s;
  std::size_t i = 0;

  bool done() const { return i >= s.size(); }
  void space() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool lit(char c) {
    space();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  bool word(std::string_view w, bool case_insensitive = false) {
    space();
    if (s.size() - i < w.size()) return false;
    for (std::size_t k = 0; k < w.size(); ++k) {
      char a = s[i + k], b = w[k];
      if (case_insensitive) {
        a = static_cast<char>(std::tolower(static_cast<unsigned char>(a)));
        b = static_cast<char>(std::tolower(static_cast<unsigned char>(b)));
      }
      if (a != b) return false;
    }
    i += w.size();
    return true;
  }
  // Up to nine digits, so every accepted value fits a NodeId and an int.
  std::optional<long> number() {
    space();
    std::size_t start = i;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (i == start || i - start > 9) {
      i = start;
      return std::nullopt;
    }
    long v = 0;
    for (std::size_t k = start; k < i; ++k) v = v * 10 + (s[k] - '0');
    return v;
  }
  bool rest_is(std::string_view allowed) {
    while (i < s.size()) {
      if (!std::isspace(static_cast<unsigned char>(s[i])) && allowed.find(s[i]) == std::string_view::npos) {
        return false;
      }
      ++i;
    }
    return true;
  }
};

bool is_fence(std::string_view line) { return trim(line).starts_with("```"); }

struct Block {
  std::string lang;
  std::string body;
};

std::vector<Block> fenced_blocks(std::string_view text) {
  std::vector<Block> out;
  std::optional<Block> open;
  for (std::string_view line : split_lines(text)) {
    if (is_fence(line)) {
      if (open) {
        out.push_back(std::move(*open));
        open.reset();
      } else {
        open = Block{std::string(trim(trim(line).substr(3))), {}};
      }
      continue;
    }
    if (open) {
      open->body += line;
      open->body += '\n';
    }
  }
  return out;
}

Malformed malformed(std::string_view why, std::string detail = {}) {
  return Malformed{std::string(why), std::move(detail)};
}

bool blank(std::string_view text) { return trim(text).empty(); }

// ---------------------------------------------------------------- layering

struct RankLine {
  NodeId node;
  std::optional<int> rank;  // nullopt = unreachable
};

std::optional<RankLine> rank_line(std::string_view line) {
  Scan sc{trim(line)};
  auto node = sc.number();
  if (!node) return std::nullopt;
  sc.space();
  if (sc.done() || (sc.s[sc.i] != '-' && sc.s[sc.i] != ':')) return std::nullopt;
  ++sc.i;
  RankLine out{static_cast<NodeId>(*node), std::nullopt};
  if (auto r = sc.number()) {
    out.rank = static_cast<int>(*r);
  } else if (!sc.word("unreachable", true)) {
    return std::nullopt;
  }
  if (!sc.rest_is(".,;")) return std::nullopt;
  return out;
}

Parsed parse_layering(std::string_view text) {
  std::vector<std::vector<RankLine>> blocks;
  std::vector<RankLine> current;
  auto close = [&] {
    if (!current.empty()) blocks.push_back(std::move(current));
    current.clear();
  };
  for (std::string_view line : split_lines(text)) {
    if (auto row = rank_line(line)) {
      current.push_back(*row);
    } else if (!blank(line) && !is_fence(line)) {
      close();
    }
  }
  close();
  if (blocks.empty()) return malformed(reason::kNoAnswer, "no '<id> - <rank>' lines");
  LayeringAnswer out;
  std::set<NodeId> seen;
  for (const RankLine& row : blocks.back()) {
    if (!seen.insert(row.node).second) {
      return malformed(reason::kDuplicateNode, fmt::format("node {} listed twice", row.node));
    }
    if (row.rank) {
      out.ranks[row.node] = *row.rank;
    } else {
      out.unreachable.push_back(row.node);
    }
  }
  return out;
}

// ---------------------------------------------------------------- ordering

struct LayerLine {
  long index;
  std::vector<NodeId> nodes;
  bool numeric = true;
};

std::optional<LayerLine> layer_line(std::string_view line) {
  Scan sc{trim(line)};
  if (!sc.word("Layer", true)) return std::nullopt;
  auto index = sc.number();
  if (!index || !sc.lit(':') || !sc.lit('[')) return std::nullopt;
  const std::size_t close = sc.s.find(']', sc.i);
  if (close == std::string_view::npos) return std::nullopt;
  LayerLine out{*index, {}};
  std::string_view inside = trim(sc.s.substr(sc.i, close - sc.i));
  sc.i = close + 1;
  if (!sc.rest_is(".,;")) return std::nullopt;
  while (!inside.empty()) {
    const std::size_t comma = inside.find(',');
    std::string_view item = trim(inside.substr(0, comma));
    Scan it{item};
    auto v = it.number();
    if (!v || !it.done()) {
      out.numeric = false;
    } else {
      out.nodes.push_back(static_cast<NodeId>(*v));
    }
    if (comma == std::string_view::npos) break;
    inside.remove_prefix(comma + 1);
  }
  return out;
}

Parsed parse_ordering(std::string_view text) {
  std::vector<std::vector<LayerLine>> blocks;
  for (std::string_view line : split_lines(text)) {
    auto row = layer_line(line);
    if (!row) continue;
    if (blocks.empty() || row->index == 0 || row->index != blocks.back().back().index + 1) {
      blocks.emplace_back();
    }
    blocks.back().push_back(std::move(*row));
  }
  if (blocks.empty()) return malformed(reason::kNoAnswer, "no 'Layer i: [...]' lines");
  const auto& last = blocks.back();
  if (last.front().index != 0) {
    return malformed(reason::kBadLayerIndex,
                     fmt::format("final block starts at layer {}", last.front().index));
  }
  LayeredOrdering out;
  std::set<NodeId> seen;
  for (const LayerLine& row : last) {
    if (!row.numeric) {
      return malformed(reason::kNonNumeric, fmt::format("layer {} lists a non-numeric node", row.index));
    }
    for (NodeId v : row.nodes) {
      if (!seen.insert(v).second) {
        return malformed(reason::kDuplicateNode, fmt::format("node {} listed twice", v));
      }
    }
    out.layers.push_back(row.nodes);
  }
  return out;
}

// ---------------------------------------------------------------- numbers

// Last integer that is not glued to a word (s1, t2, x86) or a decimal.
std::optional<long> last_standalone_integer(std::string_view text, bool& saw_digits) {
  std::optional<long> found;
  saw_digits = false;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    saw_digits = true;
    const std::size_t start = i;
    while (i < text.size() && is_digit(text[i])) ++i;
    const std::size_t end = i;
    bool ok = true;
    if (start > 0) {
      const char before = text[start - 1];
      if (is_word(before)) ok = false;
      if (before == '.' && start > 1 && is_digit(text[start - 2])) ok = false;
      if (before == '-' && start > 1 && is_digit(text[start - 2])) ok = true;
    }
    if (end < text.size()) {
      const char after = text[end];
      if (is_word(after)) ok = false;
      if ((after == '.' || after == ',') && end + 1 < text.size() && is_digit(text[end + 1])) {
        ok = false;
      }
    }
    if (ok && end - start <= 15) {
      long v = 0;
      for (std::size_t k = start; k < end; ++k) v = v * 10 + (text[k] - '0');
      found = v;
    }
  }
  return found;
}

bool pair_line(std::string_view line) {
  Scan sc{trim(line)};
  if (sc.lit('-') || sc.lit('*')) {
  }
  for (int k = 0; k < 2; ++k) {
    if (k == 1 && !sc.word("and", true)) return false;
    if (!sc.lit('(') || !sc.number() || !sc.lit(',') || !sc.number() || !sc.lit(')')) return false;
  }
  return sc.rest_is(".,;");
}

Parsed parse_number(TaskKind task, std::string_view text) {
  if (blank(text)) return malformed(reason::kNoAnswer, "empty response");
  if (task == TaskKind::CountCrossings) {
    std::vector<std::string_view> lines;
    for (std::string_view line : split_lines(text)) {
      if (!blank(line) && !is_fence(line)) lines.push_back(trim(line));
    }
    if (lines.size() == 1) {
      std::string low(lines[0]);
      for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (low == "[]" || low == "empty" || low == "empty list" || low == "[]." ) return 0L;
    }
    if (!lines.empty() && std::all_of(lines.begin(), lines.end(), pair_line)) {
      return static_cast<long>(lines.size());
    }
  }
  bool saw_digits = false;
  auto v = last_standalone_integer(text, saw_digits);
  if (v) return *v;
  if (!saw_digits) return malformed(reason::kNoAnswer, "no number in the response");
  return malformed(reason::kNonNumeric, "no standalone integer in the response");
}

Parsed parse_yes_no(std::string_view text) {
  std::optional<bool> last;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i > 0 && is_word(text[i - 1])) continue;
    auto match = [&](std::string_view w) {
      if (text.size() - i < w.size()) return false;
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (std::tolower(static_cast<unsigned char>(text[i + k])) != w[k]) return false;
      }
      return i + w.size() == text.size() || !is_word(text[i + w.size()]);
    };
    if (match("yes")) last = true;
    else if (match("no")) last = false;
  }
  if (!last) return malformed(reason::kNoAnswer, "no yes/no answer");
  return *last;
}

// ---------------------------------------------------------------- blocks

// Index one past the brace matching text[open], or npos.
std::size_t match_brace(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

// Last "graph/digraph [name] { ... }" with balanced braces.
std::optional<std::string> raw_dot(std::string_view text) {
  std::optional<std::string> found;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i > 0 && is_word(text[i - 1])) continue;
    std::size_t j = i;
    if (text.substr(j).starts_with("strict")) {
      j += 6;
      while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    }
    if (text.substr(j).starts_with("digraph")) j += 7;
    else if (text.substr(j).starts_with("graph")) j += 5;
    else continue;
    if (j < text.size() && is_word(text[j])) continue;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j < text.size() && text[j] == '"') {
      const std::size_t q = text.find('"', j + 1);
      if (q == std::string_view::npos) continue;
      j = q + 1;
    } else {
      while (j < text.size() && is_word(text[j])) ++j;
    }
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j >= text.size() || text[j] != '{') continue;
    const std::size_t end = match_brace(text, j);
    if (end == std::string_view::npos) continue;
    found = std::string(text.substr(i, end - i));
    i = end - 1;
  }
  return found;
}

std::optional<std::string> raw_json(std::string_view text) {
  std::optional<std::string> found;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') continue;
    const std::size_t end = match_brace(text, i);
    if (end == std::string_view::npos) break;
    found = std::string(text.substr(i, end - i));
    i = end - 1;
  }
  return found;
}

std::optional<std::string> raw_between(std::string_view text, std::string_view open,
                                       std::string_view close) {
  const std::size_t start = text.rfind(open);
  if (start == std::string_view::npos) return std::nullopt;
  const std::size_t end = text.find(close, start);
  if (end == std::string_view::npos) return std::nullopt;
  return std::string(text.substr(start, end + close.size() - start));
}

std::optional<std::string> last_block(std::string_view text) {
  auto blocks = fenced_blocks(text);
  if (blocks.empty()) return std::nullopt;
  return blocks.back().body;
}

Parsed graph_or_malformed(std::string_view text, GraphFormat format) {
  try {
    return parse_graph(text, format);
  } catch (const std::exception& e) {
    return malformed(reason::kInvalidGraph, e.what());
  }
}

std::optional<GraphFormat> sniff_format(std::string_view text) {
  text = trim(text);
  if (text.starts_with("<")) return GraphFormat::GraphMLSubset;
  if (text.starts_with("{")) return GraphFormat::JsonGraph;
  if (text.starts_with("Graph G has")) return GraphFormat::EdgeListText;
  if (text.starts_with("graph") || text.starts_with("digraph") || text.starts_with("strict")) {
    return GraphFormat::DotSubset;
  }
  return std::nullopt;
}

Parsed parse_json_graph(std::string_view text) {
  auto body = last_block(text);
  if (!body) body = raw_json(text);
  if (!body) return malformed(blank(text) ? reason::kNoAnswer : reason::kNoBlock, "no JSON object");
  return graph_or_malformed(*body, GraphFormat::JsonGraph);
}

Parsed parse_conversion(std::string_view text) {
  if (blank(text)) return malformed(reason::kNoAnswer, "empty response");
  std::string body = last_block(text).value_or(std::string(trim(text)));
  auto format = sniff_format(body);
  if (!format) return malformed(reason::kNoBlock, "unrecognised graph format");
  Parsed g = graph_or_malformed(body, *format);
  if (auto* graph = std::get_if<Graph>(&g)) return ConvertedGraph{*format, std::move(*graph)};
  return g;
}

Parsed parse_dot_answer(std::string_view text) {
  std::optional<std::string> body;
  for (const auto& b : fenced_blocks(text)) {
    if (raw_dot(b.body)) body = b.body;
  }
  if (!body) body = raw_dot(text);
  if (!body) return malformed(blank(text) ? reason::kNoAnswer : reason::kNoBlock, "no DOT graph");
  return graph_or_malformed(*body, GraphFormat::DotSubset);
}

Parsed parse_svg_answer(std::string_view text) {
  std::optional<std::string> body;
  for (const auto& b : fenced_blocks(text)) {
    if (b.body.find("<svg") != std::string::npos) body = b.body;
  }
  if (!body) body = raw_between(text, "<svg", "</svg>");
  if (!body) return malformed(blank(text) ? reason::kNoAnswer : reason::kNoBlock, "no <svg> element");
  SvgSummary summary = inspect_svg(*body);
  if (!summary.well_formed) return malformed(reason::kInvalidXml, summary.error);
  return summary;
}

Parsed parse_unchecked(TaskKind task, std::string_view text) {
  switch (task) {
    case TaskKind::LayerAssignment: return parse_layering(text);
    case TaskKind::SortLayers: return parse_ordering(text);
    case TaskKind::CountCrossings:
    case TaskKind::EdgeLength: return parse_number(task, text);
    case TaskKind::PropertyCheck: return parse_yes_no(text);
    case TaskKind::GraphGeneration: return parse_json_graph(text);
    case TaskKind::FormatConversion: return parse_conversion(text);
    case TaskKind::GraphFromScene: return parse_dot_answer(text);
    case TaskKind::SceneFromGraph:
      if (blank(text)) return malformed(reason::kNoAnswer, "empty response");
      if (std::none_of(text.begin(), text.end(), [](unsigned char c) { return std::isalpha(c); })) {
        return malformed(reason::kNoAnswer, "no words");
      }
      return SceneText{std::string(trim(text))};
    case TaskKind::SvgFromDot: return parse_svg_answer(text);
  }
  return malformed(reason::kNoAnswer, "unknown task");
}

}  // namespace

Parsed parse_response(TaskKind task, std::string_view text) {
  try {
    return parse_unchecked(task, text);
  } catch (const std::exception& e) {
    return malformed(reason::kNoAnswer, e.what());
  } catch (...) {
    return malformed(reason::kNoAnswer, "unexpected failure");
  }
}

LayeredOrdering oracle_ordering(const SortLayersTask& task) {
  return median_sweep(task.input, task.graph, 1);
}

Graph oracle_generated_graph(const GraphGenerationTask& task, std::uint64_t seed) {
  GeneratorOptions options;
  options.simple = task.edges <= task.nodes * (task.nodes - 1) / 2;
  options.timestamps = task.timestamps;
  if (task.min_weight) options.weight_lower_bound = std::max(0.0, *task.min_weight);
  return generate_random_graph(task.nodes, task.edges, options, seed);
}

std::string oracle_answer(const TaskInstance& instance, const Strategy& strategy,
                          std::optional<std::uint64_t> noise) {
  return std::visit(
      [&](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, LayerAssignmentTask>) {
          return layer_assignment_answer(t, strategy, noise);
        } else if constexpr (std::is_same_v<T, SortLayersTask>) {
          LayeredOrdering sorted = oracle_ordering(t);
          if (noise) {
            std::vector<std::size_t> movable;
            for (std::size_t i = 0; i < sorted.layers.size(); ++i) {
              if (sorted.layers[i].size() > 1) movable.push_back(i);
            }
            if (!movable.empty()) {
              auto& layer = sorted.layers[movable[*noise % movable.size()]];
              const std::size_t at = (*noise / movable.size()) % (layer.size() - 1);
              std::swap(layer[at], layer[at + 1]);
            }
          }
          if (strategy.kind == Strategy::Kind::Steps) {
            return "Input layers:\n" + layer_text(t.input) + "\n\nSorted layers:\n" +
                   layer_text(sorted);
          }
          return layer_text(sorted);
        } else if constexpr (std::is_same_v<T, CountCrossingsTask>) {
          return crossing_answer(t, strategy, noise);
        } else if constexpr (std::is_same_v<T, EdgeLengthTask>) {
          return edge_length_answer(t, strategy, noise);
        } else if constexpr (std::is_same_v<T, GraphGenerationTask>) {
          Graph g = oracle_generated_graph(t, mix_seed(0, instance.id));
          if (noise) g = drop_edge(g, *noise);
          return fenced("json", emit_graph(g, GraphFormat::JsonGraph));
        } else if constexpr (std::is_same_v<T, FormatConversionTask>) {
          Graph g = noise ? drop_edge(t.graph, *noise) : t.graph;
          return fenced(fence_language(t.to), emit_graph(g, t.to, {.allow_lossy = true}));
        } else if constexpr (std::is_same_v<T, PropertyCheckTask>) {
          const bool yes = property_holds(t) != noise.has_value();
          return yes ? "Yes." : "No.";
        } else if constexpr (std::is_same_v<T, GraphFromSceneTask>) {
          Graph g = noise ? drop_edge(t.truth, *noise) : t.truth;
          return fenced("dot", emit_graph(g, GraphFormat::DotSubset, {.allow_lossy = true}));
        } else if constexpr (std::is_same_v<T, SceneFromGraphTask>) {
          return write_scene(noise ? drop_edge(t.graph, *noise) : t.graph);
        } else {
          Graph g = noise ? drop_edge(t.graph, *noise) : t.graph;
          const SvgDocument doc = render_layout_svg(g, circular_positions(g, 120.0));
          return fenced("svg", doc.str());
        }
      },
      instance.payload);
}

}  // namespace layerlab
