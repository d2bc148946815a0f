#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "layerlab/errors.hpp"
#include "layerlab/graph.hpp"

namespace layerlab::detail {

/// Forward-only scanner over a text buffer with line/column reporting.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char get() { return at_end() ? '\0' : text_[pos_++]; }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t pos) { pos_ = pos; }
  std::string_view rest() const { return text_.substr(pos_); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!consume(token)) fail(std::string("expected '") + std::string(token) + "'");
  }

  std::optional<std::uint64_t> unsigned_number() {
    std::size_t start = pos_;
    std::uint64_t value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + static_cast<std::uint64_t>(get() - '0');
      if (value > 0xffffffffULL) {
        pos_ = start;
        fail("number out of range");
      }
    }
    if (pos_ == start) return std::nullopt;
    return value;
  }

  std::uint64_t expect_number() {
    auto n = unsigned_number();
    if (!n) fail("expected a non-negative integer");
    return *n;
  }

  std::size_t line() const { return line_col(pos_).first; }
  std::size_t column() const { return line_col(pos_).second; }

  [[noreturn]] void fail(const std::string& message) const {
    auto [line, col] = line_col(pos_);
    throw ParseError(message, line, col);
  }

 private:
  std::pair<std::size_t, std::size_t> line_col(std::size_t pos) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < pos && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

/// Maps textual node names to ids. When every name is a non-negative
/// integer (optionally prefixed with 'n', as GraphML corpora do) the
/// integers become the ids; otherwise ids are assigned in order of first
/// appearance and the name is kept as the label.
class NameTable {
 public:
  explicit NameTable(bool allow_n_prefix = false) : allow_n_prefix_(allow_n_prefix) {}

  /// Returns false if the name was already declared.
  bool declare(const std::string& name) {
    if (index_.count(name)) return false;
    index_.emplace(name, names_.size());
    names_.push_back(name);
    return true;
  }
  /// Declares on first use; returns the slot index.
  std::size_t use(const std::string& name) {
    declare(name);
    return index_.at(name);
  }
  bool known(const std::string& name) const { return index_.count(name) != 0; }
  std::size_t slot(const std::string& name) const { return index_.at(name); }
  std::size_t size() const { return names_.size(); }

  /// Resolves slots to final node ids and builds the node list.
  std::vector<Node> resolve(std::vector<NodeId>& slot_to_id) const {
    std::vector<std::optional<NodeId>> numeric(names_.size());
    bool all_numeric = true;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      numeric[i] = as_number(names_[i]);
      if (!numeric[i]) all_numeric = false;
    }
    std::vector<Node> nodes(names_.size());
    slot_to_id.assign(names_.size(), 0);
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (all_numeric) {
        nodes[i].id = *numeric[i];
      } else {
        nodes[i].id = static_cast<NodeId>(i);
        nodes[i].label = names_[i];
      }
      slot_to_id[i] = nodes[i].id;
    }
    return nodes;
  }

 private:
  std::optional<NodeId> as_number(std::string_view s) const {
    if (allow_n_prefix_ && s.size() > 1 && s[0] == 'n') s.remove_prefix(1);
    if (s.empty() || s.size() > 9) return std::nullopt;
    if (s.size() > 1 && s[0] == '0') return std::nullopt;
    NodeId v = 0;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      v = v * 10 + static_cast<NodeId>(c - '0');
    }
    return v;
  }

  bool allow_n_prefix_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace layerlab::detail
