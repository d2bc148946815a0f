#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "formats_internal.hpp"
#include "layerlab/errors.hpp"
#include "text_cursor.hpp"

namespace layerlab::detail {

namespace {

enum class Tok { Id, LBrace, RBrace, LBracket, RBracket, Semi, Comma, Equals, UndirOp, DirOp, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  bool quoted = false;
  std::size_t pos = 0;
};

bool is_id_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_id_char(char c) { return is_id_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

class DotLexer {
 public:
  explicit DotLexer(std::string_view text) : cur_(text) {}

  Token next() {
    skip_trivia();
    Token t;
    t.pos = cur_.pos();
    if (cur_.at_end()) return t;
    const char c = cur_.peek();
    auto single = [&](Tok kind) {
      cur_.get();
      t.kind = kind;
      return t;
    };
    switch (c) {
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ';': return single(Tok::Semi);
      case ',': return single(Tok::Comma);
      case '=': return single(Tok::Equals);
      default: break;
    }
    if (cur_.consume("--")) {
      t.kind = Tok::UndirOp;
      return t;
    }
    if (cur_.consume("->")) {
      t.kind = Tok::DirOp;
      return t;
    }
    if (c == '"') {
      cur_.get();
      t.kind = Tok::Id;
      t.quoted = true;
      while (true) {
        if (cur_.at_end()) cur_.fail("unterminated string");
        char ch = cur_.get();
        if (ch == '"') break;
        if (ch == '\\' && cur_.peek() == '"') ch = cur_.get();
        t.text += ch;
      }
      return t;
    }
    if (is_id_start(c)) {
      t.kind = Tok::Id;
      while (!cur_.at_end() && is_id_char(cur_.peek())) t.text += cur_.get();
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
      t.kind = Tok::Id;
      if (c == '-') t.text += cur_.get();
      bool digits = false;
      while (!cur_.at_end() &&
             (std::isdigit(static_cast<unsigned char>(cur_.peek())) || cur_.peek() == '.')) {
        digits = digits || cur_.peek() != '.';
        t.text += cur_.get();
      }
      if (!digits) cur_.fail("expected a numeral");
      return t;
    }
    cur_.fail(fmt::format("unexpected character '{}'", c));
  }

  [[noreturn]] void fail_at(std::size_t pos, const std::string& message) {
    cur_.seek(pos);
    cur_.fail(message);
  }

 private:
  void skip_trivia() {
    while (true) {
      cur_.skip_space();
      if (cur_.consume("//") || (cur_.peek() == '#' && cur_.consume("#"))) {
        while (!cur_.at_end() && cur_.peek() != '\n') cur_.get();
      } else if (cur_.consume("/*")) {
        while (!cur_.at_end() && !cur_.consume("*/")) cur_.get();
      } else {
        return;
      }
    }
  }

  Cursor cur_;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

class DotParser {
 public:
  explicit DotParser(std::string_view text) : lex_(text) { advance(); }

  Graph parse() {
    if (tok_.kind == Tok::Id && !tok_.quoted && lower(tok_.text) == "strict") advance();
    if (tok_.kind != Tok::Id || tok_.quoted) fail("expected 'graph' or 'digraph'");
    const std::string head = lower(tok_.text);
    if (head == "graph") {
      directed_ = false;
    } else if (head == "digraph") {
      directed_ = true;
    } else {
      fail("expected 'graph' or 'digraph'");
    }
    advance();
    if (tok_.kind == Tok::Id) advance();
    expect(Tok::LBrace, "'{'");
    while (tok_.kind != Tok::RBrace) {
      if (tok_.kind == Tok::End) fail("expected '}'");
      statement();
    }
    advance();
    if (tok_.kind != Tok::End) fail("unexpected content after closing '}'");

    std::vector<NodeId> slot_to_id;
    std::vector<Node> nodes = names_.resolve(slot_to_id);
    std::vector<Edge> edges;
    edges.reserve(raw_edges_.size());
    for (const auto& r : raw_edges_) {
      edges.push_back(Edge{slot_to_id[r.source], slot_to_id[r.target], r.weight});
    }
    return Graph(std::move(nodes), std::move(edges), directed_);
  }

 private:
  struct RawEdge {
    std::size_t source, target;
    std::optional<double> weight;
  };

  void advance() { tok_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& message) { lex_.fail_at(tok_.pos, message); }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(fmt::format("expected {}", what));
    advance();
  }

  void statement() {
    if (tok_.kind != Tok::Id) fail("expected a node name");
    if (!tok_.quoted) {
      const std::string kw = lower(tok_.text);
      if (kw == "node" || kw == "edge" || kw == "graph" || kw == "subgraph" || kw == "digraph") {
        fail(fmt::format("'{}' statements are not supported", tok_.text));
      }
    }
    std::vector<std::size_t> chain{names_.use(tok_.text)};
    advance();
    if (tok_.kind == Tok::Equals) fail("graph attribute assignments are not supported");
    while (tok_.kind == Tok::UndirOp || tok_.kind == Tok::DirOp) {
      const bool arrow = tok_.kind == Tok::DirOp;
      if (arrow != directed_) {
        fail(directed_ ? "'--' used in a digraph" : "'->' used in an undirected graph");
      }
      advance();
      if (tok_.kind != Tok::Id) fail("expected a node name after edge operator");
      chain.push_back(names_.use(tok_.text));
      advance();
    }
    std::optional<double> weight;
    if (tok_.kind == Tok::LBracket) weight = attributes(chain.size() > 1);
    if (tok_.kind == Tok::Semi) advance();
    for (std::size_t i = 1; i < chain.size(); ++i) {
      raw_edges_.push_back(RawEdge{chain[i - 1], chain[i], weight});
    }
  }

  std::optional<double> attributes(bool on_edge) {
    advance();
    std::optional<double> weight;
    while (tok_.kind != Tok::RBracket) {
      if (tok_.kind != Tok::Id) fail("expected an attribute name");
      const std::string key = lower(tok_.text);
      const std::size_t key_pos = tok_.pos;
      if (key != "penwidth" || !on_edge) {
        lex_.fail_at(key_pos, fmt::format("unsupported attribute '{}' (only edge penwidth is "
                                          "supported)",
                                          tok_.text));
      }
      advance();
      expect(Tok::Equals, "'='");
      if (tok_.kind != Tok::Id) fail("expected an attribute value");
      double value = 0.0;
      const std::string& v = tok_.text;
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
      if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(value) || value <= 0) {
        fail(fmt::format("penwidth must be a positive number, got '{}'", v));
      }
      weight = value;
      advance();
      if (tok_.kind == Tok::Comma || tok_.kind == Tok::Semi) advance();
    }
    advance();
    return weight;
  }

  DotLexer lex_;
  Token tok_;
  bool directed_ = false;
  NameTable names_;
  std::vector<RawEdge> raw_edges_;
};

bool plain_identifier(const std::string& s) {
  if (s.empty() || !is_id_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), is_id_char);
}

bool numeric_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c);
  });
}

std::string quote(const std::string& s) {
  if (plain_identifier(s)) {
    const std::string kw = lower(s);
    if (kw != "node" && kw != "edge" && kw != "graph" && kw != "digraph" && kw != "subgraph" &&
        kw != "strict") {
      return s;
    }
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

// Labels can stand in for ids only when parsing them back reproduces the
// same ids: ids 0..n-1 in node order, unique non-numeric labels.
bool labels_round_trip(const Graph& g) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Node& n = g.nodes()[i];
    if (n.id != i || !n.label || numeric_name(*n.label) || n.label->empty()) return false;
    if (n.label->find('\\') != std::string::npos) return false;
    if (!seen.insert(*n.label).second) return false;
  }
  return true;
}

}  // namespace

Graph parse_dot(std::string_view text) { return DotParser(text).parse(); }

std::string emit_dot(const Graph& g, const EmitOptions& options) {
  const bool use_labels = g.has_labels() && labels_round_trip(g);
  if (!options.allow_lossy) {
    if (g.has_labels() && !use_labels) {
      throw LossyEmissionError("DOT subset can carry labels only as unique node names");
    }
    if (g.has_timestamps()) throw LossyEmissionError("DOT subset cannot carry timestamps");
  }
  auto name = [&](NodeId id) {
    return use_labels ? quote(*g.node(id).label) : std::to_string(id);
  };
  const char* op = g.directed() ? " -> " : " -- ";
  std::string out = g.directed() ? "digraph G {\n" : "graph G {\n";
  for (const Node& n : g.nodes()) out += fmt::format("    {};\n", name(n.id));
  if (g.node_count() && g.edge_count()) out += '\n';
  for (const Edge& e : g.edges()) {
    out += fmt::format("    {}{}{}", name(e.source), op, name(e.target));
    if (e.weight) out += fmt::format(" [penwidth={}]", *e.weight);
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace layerlab::detail
