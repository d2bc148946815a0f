#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "layerlab/graph.hpp"

namespace layerlab::detail {

Graph parse_graphml(std::string_view text);
std::string emit_graphml(const Graph& g, const EmitOptions& options);
Graph parse_dot(std::string_view text);
std::string emit_dot(const Graph& g, const EmitOptions& options);

/// "[a, b],[c, d]" in edge order.
std::string bracket_pairs(const std::vector<Edge>& edges);

}  // namespace layerlab::detail
