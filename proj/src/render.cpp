#include "layerlab/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "layerlab/errors.hpp"

namespace layerlab {

namespace {

std::string num(double v) {
  if (std::abs(v) < 0.005) v = 0.0;  // no "-0.00"
  return fmt::format("{:.2f}", v);
}

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// b strictly inside segment a-c, up to a small tolerance.
bool on_segment(const Point& a, const Point& b, const Point& c) {
  const double cross = (c.x - a.x) * (b.y - a.y) - (c.y - a.y) * (b.x - a.x);
  const double len = std::hypot(c.x - a.x, c.y - a.y);
  if (len == 0 || std::abs(cross) > 1e-9 * std::max(1.0, len * len)) return false;
  const double dot = (b.x - a.x) * (c.x - a.x) + (b.y - a.y) * (c.y - a.y);
  return dot > 0 && dot < len * len;
}

}  // namespace

double stroke_width_for(double weight) { return std::clamp(1.0 + weight, 0.5, 8.0); }

std::size_t SvgDocument::count_circles() const {
  return static_cast<std::size_t>(std::count_if(elements.begin(), elements.end(), [](const auto& e) {
    return std::holds_alternative<SvgCircle>(e);
  }));
}

std::size_t SvgDocument::count_edges() const {
  return static_cast<std::size_t>(std::count_if(elements.begin(), elements.end(), [](const auto& e) {
    return std::holds_alternative<SvgLine>(e);
  }));
}

std::string SvgDocument::str() const {
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      num(width), num(height));
  if (arrow_marker) {
    out +=
        "  <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" "
        "markerHeight=\"6\" orient=\"auto\"><path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker>\n";
  }
  out += "  <g>\n";
  for (const auto& element : elements) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, SvgCircle>) {
            out += fmt::format(
                "    <circle id=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"white\" "
                "stroke=\"black\"/>\n",
                escape(e.id), num(e.cx), num(e.cy), num(e.r));
          } else if constexpr (std::is_same_v<T, SvgLine>) {
            out += fmt::format(
                "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" "
                "stroke-width=\"{}\"{}/>\n",
                num(e.x1), num(e.y1), num(e.x2), num(e.y2), num(e.stroke_width),
                e.arrow ? " marker-end=\"url(#arrow)\"" : "");
          } else if constexpr (std::is_same_v<T, SvgPath>) {
            out += fmt::format("    <path d=\"{}\" fill=\"{}\" stroke=\"black\"/>\n", e.d,
                               e.fill);
          } else {
            out += fmt::format(
                "    <text x=\"{}\" y=\"{}\" text-anchor=\"{}\" font-size=\"{}\" "
                "font-family=\"sans-serif\">{}</text>\n",
                num(e.x), num(e.y), e.anchor, num(e.size), escape(e.content));
          }
        },
        element);
  }
  out += "  </g>\n</svg>\n";
  return out;
}

SvgDocument render_layout_svg(const Graph& g, const GridPositions& pos, const LayoutStyle& style) {
  std::map<NodeId, Point> at;
  for (const Node& n : g.nodes()) {
    auto it = pos.positions.find(n.id);
    if (it == pos.positions.end()) {
      throw InfeasibleError(fmt::format("node {} has no position", n.id));
    }
    Point p = it->second;
    if (style.orientation == Orientation::Vertical) std::swap(p.x, p.y);
    at[n.id] = p;
  }
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  bool first = true;
  for (const auto& [id, p] : at) {
    if (first) {
      min_x = max_x = p.x;
      min_y = max_y = p.y;
      first = false;
    }
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double pad = style.margin + style.node_radius;
  for (auto& [id, p] : at) {
    p.x = p.x - min_x + pad;
    p.y = p.y - min_y + pad;
  }

  SvgDocument doc;
  doc.width = (max_x - min_x) + 2 * pad;
  doc.height = (max_y - min_y) + 2 * pad;
  doc.arrow_marker = g.directed();

  for (const Edge& e : g.edges()) {
    const Point a = at[e.source];
    Point b = at[e.target];
    const double width = e.weight ? stroke_width_for(*e.weight) : style.unweighted_stroke;
    if (e.source == e.target) {
      const double r = style.node_radius;
      doc.elements.push_back(SvgPath{
          fmt::format("M {} {} C {} {} {} {} {} {}", num(a.x), num(a.y - r), num(a.x - 2 * r),
                      num(a.y - 3 * r), num(a.x + 2 * r), num(a.y - 3 * r), num(a.x), num(a.y - r)),
          "none"});
      continue;
    }
    if (g.directed()) {
      // Stop at the target's rim so the arrowhead stays visible.
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      if (len > style.node_radius) {
        b.x -= (b.x - a.x) * style.node_radius / len;
        b.y -= (b.y - a.y) * style.node_radius / len;
      }
    }
    doc.elements.push_back(SvgLine{a.x, a.y, b.x, b.y, width, g.directed()});
    for (const Node& n : g.nodes()) {
      if (n.id == e.source || n.id == e.target) continue;
      if (on_segment(at[e.source], at[n.id], at[e.target])) {
        doc.warnings.push_back(fmt::format("edge {}-{} passes through node {}", g.name(e.source),
                                           g.name(e.target), g.name(n.id)));
      }
    }
  }
  for (const Node& n : g.nodes()) {
    const Point p = at[n.id];
    doc.elements.push_back(SvgCircle{p.x, p.y, style.node_radius, fmt::format("n{}", n.id)});
  }
  for (const Node& n : g.nodes()) {
    const Point p = at[n.id];
    doc.elements.push_back(SvgText{p.x, p.y + 4, g.name(n.id)});
  }
  return doc;
}

GridPositions circular_positions(const Graph& g, double radius) {
  GridPositions out;
  out.spacing = radius;
  const auto n = static_cast<double>(g.node_count());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
    out.positions[g.nodes()[i].id] =
        Point{radius + radius * std::sin(angle), radius - radius * std::cos(angle)};
  }
  return out;
}

SvgDocument render_histogram_svg(const std::vector<std::pair<std::string, long>>& buckets,
                                 const std::string& title) {
  if (buckets.empty()) throw InfeasibleError("histogram needs at least one bucket");
  long top = 0;
  for (const auto& [label, count] : buckets) {
    if (count < 0) throw InfeasibleError(fmt::format("bucket '{}' has a negative count", label));
    top = std::max(top, count);
  }
  if (top == 0) throw InfeasibleError("histogram with only zero counts");

  constexpr double left = 60, right = 20, top_pad = 50, bottom = 50;
  constexpr double bar = 70, gap = 20, plot_height = 200;
  SvgDocument doc;
  doc.width = left + right + static_cast<double>(buckets.size()) * (bar + gap);
  doc.height = top_pad + plot_height + bottom;
  const double base = top_pad + plot_height;

  doc.elements.push_back(SvgText{doc.width / 2, 25, title, "middle", 16});
  doc.elements.push_back(SvgLine{left, top_pad, left, base, 1, false});
  doc.elements.push_back(SvgLine{left, base, doc.width - right, base, 1, false});
  doc.elements.push_back(SvgText{left - 10, top_pad, std::to_string(top), "end", 11});
  doc.elements.push_back(SvgText{left - 10, base, "0", "end", 11});
  doc.elements.push_back(SvgText{15, top_pad + plot_height / 2, "count", "middle", 12});
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const auto& [label, count] = buckets[i];
    const double x = left + gap / 2 + static_cast<double>(i) * (bar + gap);
    const double h = plot_height * static_cast<double>(count) / static_cast<double>(top);
    doc.elements.push_back(SvgPath{
        fmt::format("M {} {} H {} V {} H {} Z", num(x), num(base), num(x + bar), num(base - h),
                    num(x)),
        "steelblue"});
    doc.elements.push_back(SvgText{x + bar / 2, base - h - 5, std::to_string(count), "middle", 11});
    doc.elements.push_back(SvgText{x + bar / 2, base + 18, label, "middle", 11});
  }
  return doc;
}

namespace {

namespace pt = boost::property_tree;

std::string local_name(const std::string& tag) {
  auto colon = tag.find(':');
  return colon == std::string::npos ? tag : tag.substr(colon + 1);
}

double attr(const pt::ptree& node, const char* name) {
  auto v = node.get_optional<std::string>(std::string("<xmlattr>.") + name);
  if (!v) return 0.0;
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    return 0.0;
  }
}

void walk(const pt::ptree& tree, SvgSummary& out) {
  for (const auto& [tag, child] : tree) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>" || tag == "<xmltext>") continue;
    const std::string name = local_name(tag);
    if (name == "marker" || name == "defs") continue;
    if (name == "circle" || name == "ellipse") {
      ++out.node_elements;
      out.node_centres.push_back(Point{attr(child, "cx"), attr(child, "cy")});
    } else if (name == "line" || name == "path" || name == "polyline") {
      ++out.edge_elements;
    } else if (name == "text") {
      ++out.text_elements;
    }
    walk(child, out);
  }
}

}  // namespace

SvgSummary inspect_svg(std::string_view text) {
  SvgSummary out;
  pt::ptree doc;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    out.error = fmt::format("line {}: {}", e.line(), e.message());
    return out;
  }
  const pt::ptree* root = nullptr;
  std::size_t elements = 0;
  for (const auto& [tag, child] : doc) {
    if (tag == "<xmlcomment>") continue;
    ++elements;
    if (local_name(tag) == "svg") root = &child;
  }
  if (!root || elements != 1) {
    out.error = "document root is not a single <svg> element";
    return out;
  }
  out.well_formed = true;
  walk(*root, out);
  return out;
}

std::size_t count_collinear_triples(const std::vector<Point>& points) {
  std::size_t count = 0;
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t c = a + 1; c < points.size(); ++c) {
      for (std::size_t b = 0; b < points.size(); ++b) {
        if (b != a && b != c && on_segment(points[a], points[b], points[c])) ++count;
      }
    }
  }
  return count;
}

}  // namespace layerlab
