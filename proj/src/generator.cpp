#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "layerlab/errors.hpp"
#include "layerlab/graph.hpp"

namespace layerlab {

namespace {

using Pair = std::pair<NodeId, NodeId>;

// Draws `count` distinct unordered pairs from the ones not in `taken`,
// uniformly without replacement.
std::vector<Pair> draw_pairs(std::size_t n, std::size_t count, const std::set<Pair>& taken,
                             std::mt19937_64& rng) {
  const std::size_t total = n * (n - 1) / 2;
  std::vector<Pair> out;
  out.reserve(count);
  if (total <= 200000) {
    std::vector<Pair> pool;
    pool.reserve(total - taken.size());
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        if (!taken.count({a, b})) pool.emplace_back(a, b);
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      out.push_back(pool[i]);
    }
    return out;
  }
  std::set<Pair> seen = taken;
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  while (out.size() < count) {
    NodeId a = node(rng);
    NodeId b = node(rng);
    if (a == b) continue;
    Pair p = std::minmax(a, b);
    if (seen.insert(p).second) out.push_back(p);
  }
  return out;
}

}  // namespace

Graph generate_random_graph(std::size_t n, std::size_t m, const GeneratorOptions& options,
                            std::uint64_t seed) {
  if (n == 0) throw InfeasibleError("a graph needs at least one node");
  const std::size_t max_simple = n * (n - 1) / 2;
  if (options.simple && m > max_simple) {
    throw InfeasibleError(
        fmt::format("{} edges do not fit in a simple graph on {} nodes (max {})", m, n, max_simple));
  }
  if (options.connected && m + 1 < n) {
    throw InfeasibleError(fmt::format("a connected graph on {} nodes needs at least {} edges", n,
                                      n - 1));
  }
  if (!options.simple && n == 1 && m > 0) {
    throw InfeasibleError("a single node admits no edges without self-loops");
  }
  if (options.weight_lower_bound && !(*options.weight_lower_bound >= 0.0)) {
    throw InfeasibleError("weight lower bound must be non-negative");
  }
  if (options.timestamps) {
    const auto& r = *options.timestamps;
    if (!r.first.ok() || !r.last.ok() ||
        std::chrono::sys_days(r.last) < std::chrono::sys_days(r.first)) {
      throw InfeasibleError("timestamp range is empty or invalid");
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<Pair> pairs;
  pairs.reserve(m);

  std::set<Pair> taken;
  if (options.connected && n > 1) {
    // Random recursive tree over a shuffled node order.
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 1; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> parent(0, i - 1);
      Pair p = std::minmax(order[parent(rng)], order[i]);
      taken.insert(p);
      pairs.push_back(p);
    }
  }
  const std::size_t remaining = m - pairs.size();
  if (options.simple) {
    auto extra = draw_pairs(n, remaining, taken, rng);
    pairs.insert(pairs.end(), extra.begin(), extra.end());
  } else {
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
    while (pairs.size() < m) {
      NodeId a = node(rng);
      NodeId b = node(rng);
      if (a != b) pairs.emplace_back(std::minmax(a, b));
    }
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);

  std::vector<Node> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i].id = options.first_id + static_cast<NodeId>(i);
  if (options.timestamps) {
    const auto first = std::chrono::sys_days(options.timestamps->first);
    const auto span = (std::chrono::sys_days(options.timestamps->last) - first).count();
    std::uniform_int_distribution<long> offset(0, span);
    for (auto& node : nodes) node.timestamp = Date{first + std::chrono::days{offset(rng)}};
  }

  std::vector<Edge> edges;
  edges.reserve(m);
  std::uniform_real_distribution<double> unit(0.0, 10.0);
  for (auto [a, b] : pairs) {
    Edge e{options.first_id + a, options.first_id + b, std::nullopt};
    if (options.weight_lower_bound) {
      // unit() lies in [0, 10), so the weight lies in (bound, bound + 10].
      e.weight = *options.weight_lower_bound + 10.0 - unit(rng);
    }
    edges.push_back(e);
  }
  return Graph(std::move(nodes), std::move(edges), options.directed);
}

}  // namespace layerlab
