#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "layerlab/graph.hpp"
#include "layerlab/layout.hpp"

namespace layerlab {

struct SvgCircle {
  double cx, cy, r;
  std::string id;
};

struct SvgLine {
  double x1, y1, x2, y2;
  double stroke_width;
  bool arrow;
};

struct SvgPath {
  std::string d;
  std::string fill;
};

struct SvgText {
  double x, y;
  std::string content;
  std::string anchor = "middle";
  double size = 12;
};

using SvgElement = std::variant<SvgCircle, SvgLine, SvgPath, SvgText>;

/// In-memory SVG 1.1 subset. `str()` serializes byte-deterministically.
struct SvgDocument {
  double width = 0;
  double height = 0;
  bool arrow_marker = false;
  std::vector<SvgElement> elements;
  std::vector<std::string> warnings;

  std::size_t count_circles() const;
  std::size_t count_edges() const;
  std::string str() const;
};

enum class Orientation { Horizontal, Vertical };

struct LayoutStyle {
  Orientation orientation = Orientation::Horizontal;
  double node_radius = 14;
  double margin = 30;
  double unweighted_stroke = 1.5;
};

/// width = 1 + weight, clamped to [0.5, 8].
double stroke_width_for(double weight);

/// Circles at `pos` with labels, straight edges, arrowheads iff `g` is
/// directed. Reports a warning when an edge passes through the centre of
/// a node that is not one of its endpoints.
SvgDocument render_layout_svg(const Graph& g, const GridPositions& pos,
                              const LayoutStyle& style = {});

/// Nodes evenly spaced on a circle, in node order.
GridPositions circular_positions(const Graph& g, double radius);

/// One bar per bucket, left to right in input order.
SvgDocument render_histogram_svg(const std::vector<std::pair<std::string, long>>& buckets,
                                 const std::string& title);

/// Structural view of an SVG text, used to score model-produced drawings.
struct SvgSummary {
  bool well_formed = false;
  std::string error;
  std::size_t node_elements = 0;  // circle + ellipse
  std::size_t edge_elements = 0;  // line + path + polyline
  std::size_t text_elements = 0;
  std::vector<Point> node_centres;
};

SvgSummary inspect_svg(std::string_view text);

/// Triples (a, b, c) of distinct points where b lies on segment a-c.
std::size_t count_collinear_triples(const std::vector<Point>& points);

}  // namespace layerlab
