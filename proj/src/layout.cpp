#include "layerlab/layout.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "layerlab/errors.hpp"

namespace layerlab {

namespace {

// Undirected adjacency, neighbours in edge-list order.
std::vector<std::vector<NodeId>> adjacency(const Graph& g) {
  std::vector<std::vector<NodeId>> adj(g.node_count());
  for (const Edge& e : g.edges()) {
    if (e.source == e.target) {
      throw InfeasibleError(fmt::format("self-loop on node {} is not supported by layout", e.source));
    }
    adj[g.index_of(e.source)].push_back(e.target);
    adj[g.index_of(e.target)].push_back(e.source);
  }
  return adj;
}

struct Slot {
  std::size_t layer;
  std::size_t index;
};

std::unordered_map<NodeId, Slot> slots_of(const LayeredOrdering& ordering) {
  std::unordered_map<NodeId, Slot> slots;
  for (std::size_t l = 0; l < ordering.layers.size(); ++l) {
    for (std::size_t i = 0; i < ordering.layers[l].size(); ++i) {
      if (!slots.emplace(ordering.layers[l][i], Slot{l, i}).second) {
        throw InfeasibleError(
            fmt::format("node {} appears more than once in the ordering", ordering.layers[l][i]));
      }
    }
  }
  return slots;
}

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  // Count of inserted positions <= i.
  long prefix(std::size_t i) const {
    long sum = 0;
    for (++i; i > 0; i -= i & (~i + 1)) sum += tree_[i];
    return sum;
  }

 private:
  std::vector<long> tree_;
};

}  // namespace

int RankAssignment::rank_of(NodeId id) const {
  auto it = ranks.find(id);
  if (it == ranks.end()) throw InfeasibleError(fmt::format("node {} has no rank", id));
  return it->second;
}

int RankAssignment::layer_count() const {
  int top = -1;
  for (const auto& [id, r] : ranks) top = std::max(top, r);
  return top + 1;
}

std::size_t LayeredOrdering::node_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.size();
  return n;
}

LayeredOrdering LayeredOrdering::from_ranks(const RankAssignment& ranks) {
  LayeredOrdering out;
  out.layers.resize(static_cast<std::size_t>(ranks.layer_count()));
  for (const auto& [id, r] : ranks.ranks) {
    if (r < 0) throw InfeasibleError(fmt::format("node {} has negative rank {}", id, r));
    out.layers[static_cast<std::size_t>(r)].push_back(id);
  }
  return out;
}

RankAssignment LayeredOrdering::to_ranks() const {
  RankAssignment out;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (NodeId id : layers[l]) {
      if (!out.ranks.emplace(id, static_cast<int>(l)).second) {
        throw InfeasibleError(fmt::format("node {} appears more than once in the ordering", id));
      }
    }
  }
  return out;
}

void LayeredOrdering::check_unique() const { (void)slots_of(*this); }

BfsLayering layered_bfs(const Graph& g, NodeId source) {
  if (!g.contains(source)) throw InfeasibleError(fmt::format("source {} is not a node", source));
  const auto adj = adjacency(g);
  BfsLayering out;
  out.ranks.source = source;
  out.ranks.ranks[source] = 0;
  std::vector<NodeId> frontier{source};
  while (!frontier.empty()) {
    out.ordering.layers.push_back(frontier);
    const int next_rank = static_cast<int>(out.ordering.layers.size());
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId v : adj[g.index_of(u)]) {
        if (out.ranks.ranks.emplace(v, next_rank).second) next.push_back(v);
      }
    }
    frontier = std::move(next);
  }
  for (const Node& n : g.nodes()) {
    if (!out.ranks.covers(n.id)) out.ranks.unreachable.push_back(n.id);
  }
  return out;
}

RankAssignment assign_layers_bfs(const Graph& g, NodeId source) {
  return layered_bfs(g, source).ranks;
}

Graph remove_same_layer_edges(const Graph& g, const RankAssignment& ranks) {
  std::vector<Edge> kept;
  kept.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    if (ranks.rank_of(e.source) != ranks.rank_of(e.target)) kept.push_back(e);
  }
  return g.with_edges(std::move(kept));
}

double median_of(std::vector<int> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

LayeredOrdering median_sweep(const LayeredOrdering& ordering, const Graph& g, int passes,
                             SweepDirection direction) {
  if (passes < 1) throw InfeasibleError("median sweep needs at least one pass");
  auto slots = slots_of(ordering);
  for (const auto& [id, slot] : slots) {
    if (!g.contains(id)) throw InfeasibleError(fmt::format("ordering lists unknown node {}", id));
  }
  const auto adj = adjacency(g);
  LayeredOrdering out = ordering;
  const std::size_t layer_count = out.layers.size();

  auto sort_layer = [&](std::size_t layer, std::size_t reference) {
    std::vector<std::pair<double, NodeId>> keyed;
    keyed.reserve(out.layers[layer].size());
    for (NodeId u : out.layers[layer]) {
      std::vector<int> indices;
      for (NodeId v : adj[g.index_of(u)]) {
        auto it = slots.find(v);
        if (it != slots.end() && it->second.layer == reference) {
          indices.push_back(static_cast<int>(it->second.index));
        }
      }
      keyed.emplace_back(median_of(std::move(indices)), u);
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      out.layers[layer][i] = keyed[i].second;
      slots[keyed[i].second].index = i;
    }
  };

  for (int pass = 0; pass < passes; ++pass) {
    const bool upward = direction == SweepDirection::Alternating && pass % 2 == 1;
    if (!upward) {
      // Layers without a successor key everything at 0, which a stable sort leaves alone.
      for (std::size_t l = 0; l + 1 < layer_count; ++l) sort_layer(l, l + 1);
    } else {
      for (std::size_t l = layer_count; l-- > 1;) sort_layer(l, l - 1);
    }
  }
  return out;
}

CrossingFragment count_crossings_bipartite(const std::vector<NodeId>& order_a,
                                           const std::vector<NodeId>& order_b,
                                           const std::vector<Edge>& edges, bool collect_pairs) {
  std::unordered_map<NodeId, std::size_t> idx_a;
  std::unordered_map<NodeId, std::size_t> idx_b;
  for (std::size_t i = 0; i < order_a.size(); ++i) idx_a.emplace(order_a[i], i);
  for (std::size_t i = 0; i < order_b.size(); ++i) idx_b.emplace(order_b[i], i);

  struct Placed {
    std::size_t a;
    std::size_t b;
  };
  std::vector<Placed> placed;
  placed.reserve(edges.size());
  for (const Edge& e : edges) {
    auto sa = idx_a.find(e.source);
    auto tb = idx_b.find(e.target);
    if (sa != idx_a.end() && tb != idx_b.end()) {
      placed.push_back({sa->second, tb->second});
      continue;
    }
    auto ta = idx_a.find(e.target);
    auto sb = idx_b.find(e.source);
    if (ta != idx_a.end() && sb != idx_b.end()) {
      placed.push_back({ta->second, sb->second});
      continue;
    }
    throw InfeasibleError(fmt::format(
        "edge ({}, {}) does not join the two orders of the bipartite instance", e.source, e.target));
  }

  CrossingFragment out;
  std::vector<std::size_t> order(placed.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return placed[x].a != placed[y].a ? placed[x].a < placed[y].a : placed[x].b < placed[y].b;
  });
  Fenwick tree(order_b.size());
  long inserted = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && placed[order[j]].a == placed[order[i]].a) ++j;
    // Earlier groups have a strictly smaller A index; they cross when their B index is larger.
    for (std::size_t k = i; k < j; ++k) out.count += inserted - tree.prefix(placed[order[k]].b);
    for (std::size_t k = i; k < j; ++k) {
      tree.add(placed[order[k]].b);
      ++inserted;
    }
    i = j;
  }

  if (collect_pairs) {
    for (std::size_t i = 0; i < placed.size(); ++i) {
      for (std::size_t j = i + 1; j < placed.size(); ++j) {
        const long da = static_cast<long>(placed[i].a) - static_cast<long>(placed[j].a);
        const long db = static_cast<long>(placed[i].b) - static_cast<long>(placed[j].b);
        if (da * db < 0) out.pairs.push_back({edges[i], edges[j]});
      }
    }
  }
  return out;
}

std::vector<Edge> gap_edges(const LayeredOrdering& ordering, const Graph& g, std::size_t gap) {
  const auto slots = slots_of(ordering);
  std::vector<Edge> out;
  for (const Edge& e : g.edges()) {
    auto s = slots.find(e.source);
    auto t = slots.find(e.target);
    if (s == slots.end() || t == slots.end()) continue;
    if (s->second.layer == gap && t->second.layer == gap + 1) {
      out.push_back(e);
    } else if (t->second.layer == gap && s->second.layer == gap + 1) {
      out.push_back(Edge{e.target, e.source, e.weight});
    }
  }
  return out;
}

CrossingReport count_crossings_total(const LayeredOrdering& ordering, const Graph& g,
                                     bool collect_pairs) {
  const auto slots = slots_of(ordering);
  const std::size_t gaps = ordering.layers.empty() ? 0 : ordering.layers.size() - 1;
  std::vector<std::vector<Edge>> per_gap(gaps);
  for (const Edge& e : g.edges()) {
    auto s = slots.find(e.source);
    auto t = slots.find(e.target);
    if (s == slots.end() || t == slots.end()) {
      throw InfeasibleError(
          fmt::format("edge ({}, {}) has an endpoint missing from the ordering", e.source, e.target));
    }
    const auto ls = s->second.layer;
    const auto lt = t->second.layer;
    const auto span = ls > lt ? ls - lt : lt - ls;
    if (span != 1) {
      throw InfeasibleError(fmt::format(
          "edge ({}, {}) spans {} layers; crossing count needs every edge to span exactly one gap",
          e.source, e.target, span));
    }
    per_gap[std::min(ls, lt)].push_back(e);
  }
  CrossingReport report;
  if (collect_pairs) report.pairs.emplace();
  for (std::size_t i = 0; i < gaps; ++i) {
    auto fragment = count_crossings_bipartite(ordering.layers[i], ordering.layers[i + 1],
                                              per_gap[i], collect_pairs);
    report.per_gap.emplace_back(i, fragment.count);
    report.total += fragment.count;
    if (collect_pairs) {
      report.pairs->insert(report.pairs->end(), fragment.pairs.begin(), fragment.pairs.end());
    }
  }
  return report;
}

long total_edge_length(const RankAssignment& ranks, const Graph& g) {
  long total = 0;
  for (const Edge& e : g.edges()) total += std::labs(ranks.rank_of(e.source) - ranks.rank_of(e.target));
  return total;
}

RankAssignment random_layering(const Graph& g, int num_layers, std::uint64_t seed) {
  if (num_layers < 1) throw InfeasibleError("random layering needs at least one layer");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> layer(0, num_layers - 1);
  RankAssignment out;
  for (const Node& n : g.nodes()) out.ranks[n.id] = layer(rng);
  return out;
}

bool is_valid_layering(const Graph& g, const RankAssignment& ranks, NodeId source) {
  if (!g.contains(source)) return false;
  auto it = ranks.ranks.find(source);
  if (it == ranks.ranks.end() || it->second != 0) return false;
  const auto reachable = assign_layers_bfs(g, source);
  const std::unordered_set<NodeId> declared_unreachable(ranks.unreachable.begin(),
                                                        ranks.unreachable.end());
  for (const Node& n : g.nodes()) {
    const bool ranked = ranks.covers(n.id);
    const bool unreachable = declared_unreachable.count(n.id) != 0;
    if (ranked == unreachable) return false;
    if (unreachable && reachable.covers(n.id)) return false;
  }
  const auto adj = adjacency(g);
  for (const auto& [id, r] : ranks.ranks) {
    if (!g.contains(id) || r < 0) return false;
    if (r == 0) {
      if (id != source) return false;
      continue;
    }
    const auto& nbrs = adj[g.index_of(id)];
    const bool has_parent = std::any_of(nbrs.begin(), nbrs.end(), [&](NodeId v) {
      auto p = ranks.ranks.find(v);
      return p != ranks.ranks.end() && p->second == r - 1;
    });
    if (!has_parent) return false;
  }
  return true;
}

GridPositions assign_coordinates(const LayeredOrdering& ordering, double spacing) {
  if (ordering.node_count() == 0) throw InfeasibleError("cannot place an empty ordering");
  if (!(spacing > 0)) throw InfeasibleError("grid spacing must be positive");
  slots_of(ordering);
  GridPositions out;
  out.spacing = spacing;
  for (std::size_t l = 0; l < ordering.layers.size(); ++l) {
    for (std::size_t i = 0; i < ordering.layers[l].size(); ++i) {
      out.positions[ordering.layers[l][i]] =
          Point{static_cast<double>(l) * spacing, static_cast<double>(i) * spacing};
    }
  }
  return out;
}

}  // namespace layerlab
