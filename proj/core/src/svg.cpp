#include "prismflats/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "engine_internal.hpp"

namespace prismflats {

namespace {

constexpr double kScale = 100.0;  // drawing units per unit length
constexpr double kMargin = 20.0;

const char* const kPolygonFills[] = {"#cfe0f4", "#f4d9cf", "#d8f0d0", "#f2eccb",
                                     "#e0d4f0", "#cdeeea", "#f0d4e4", "#dde3e8"};
constexpr int kNumPolygonFills = 8;
const char* const kCylinderFills[] = {"#2f6db4", "#c05a2e", "#4e9646",
                                      "#b49a2f", "#7459a8", "#3a9c92"};
constexpr int kNumCylinderFills = 6;

std::string fmt(double v) {
  if (std::abs(v) < 5e-4) v = 0;  // keep "-0.000" out of the output
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

/// Model coordinates to drawing coordinates: scaled, y flipped.
std::pair<double, double> place(const std::pair<double, double>& p) {
  return {kScale * p.first, -kScale * p.second};
}

struct Box {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;

  void add(const std::pair<double, double>& p) {
    if (first) {
      xmin = xmax = p.first;
      ymin = ymax = p.second;
      first = false;
      return;
    }
    xmin = std::min(xmin, p.first);
    xmax = std::max(xmax, p.first);
    ymin = std::min(ymin, p.second);
    ymax = std::max(ymax, p.second);
  }
};

std::string path_data(const std::vector<std::pair<double, double>>& placed) {
  std::string d;
  for (size_t i = 0; i < placed.size(); ++i) {
    d += (i == 0) ? "M " : "L ";
    d += fmt(placed[i].first) + " " + fmt(placed[i].second) + " ";
  }
  d += "Z";
  return d;
}

std::vector<std::pair<double, double>> placed_polygon(const Polygon& poly) {
  std::vector<std::pair<double, double>> out;
  out.reserve(poly.vertices.size());
  for (const Point2& v : poly.vertices) out.push_back(place(approx_point(v)));
  return out;
}

std::string document(const std::vector<std::vector<std::pair<double, double>>>& placed,
                     const std::string& overlays) {
  Box box;
  for (const auto& poly : placed) {
    for (const auto& p : poly) box.add(p);
  }
  const double w = box.xmax - box.xmin + 2 * kMargin;
  const double h = box.ymax - box.ymin + 2 * kMargin;

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
  out += fmt(box.xmin - kMargin) + " " + fmt(box.ymin - kMargin) + " " + fmt(w) + " " + fmt(h);
  out += "\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) + "\">\n";
  out += "<g stroke=\"#45505a\" stroke-width=\"1.5\" stroke-linejoin=\"round\">\n";
  for (size_t i = 0; i < placed.size(); ++i) {
    out += "<path d=\"" + path_data(placed[i]) + "\" fill=\"" +
           kPolygonFills[i % kNumPolygonFills] + "\"/>\n";
  }
  out += "</g>\n";
  out += overlays;
  out += "</svg>\n";
  return out;
}

}  // namespace

std::string render_surface_svg(const Surface& s, const RenderOverlays& overlays) {
  std::vector<std::vector<std::pair<double, double>>> placed;
  placed.reserve(s.num_polygons());
  for (const auto& poly : s.float_vertices()) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(poly.size());
    for (const auto& v : poly) pts.push_back(place(v));
    placed.push_back(std::move(pts));
  }

  std::string extra;
  for (size_t ci = 0; ci < overlays.cylinders.size(); ++ci) {
    const char* fill = kCylinderFills[ci % kNumCylinderFills];
    for (const auto& pr : overlays.cylinders[ci].footprint) {
      extra += "<path d=\"" + path_data(placed_polygon(pr.second)) + "\" fill=\"" + fill +
               "\" fill-opacity=\"0.45\"/>\n";
    }
  }

  // A saddle connection is one straight segment on the surface but crosses
  // several charts; retracing it recovers the per-polygon pieces.
  for (const SaddleConnection& sc : overlays.connections) {
    std::vector<detail::RaySegment> segs;
    const auto outcome = detail::trace_ray(s, sc.start_corner, sc.exact_holonomy,
                                           sc.length * (1 + 1e-9) + 1e-9, &segs);
    if (!outcome.hit) continue;
    for (const auto& seg : segs) {
      const auto a = place(approx_point(seg.enter));
      const auto b = place(approx_point(seg.exit));
      extra += "<line x1=\"" + fmt(a.first) + "\" y1=\"" + fmt(a.second) + "\" x2=\"" +
               fmt(b.first) + "\" y2=\"" + fmt(b.second) +
               "\" stroke=\"#1d3a5f\" stroke-width=\"2\"/>\n";
    }
  }

  for (const auto& [p, z] : overlays.markers) {
    (void)p;
    const auto c = place(approx_point(z));
    extra += "<circle cx=\"" + fmt(c.first) + "\" cy=\"" + fmt(c.second) +
             "\" r=\"5\" fill=\"#b03036\"/>\n";
  }

  return document(placed, extra);
}

std::string render_net_svg(const NetLayout& net) {
  std::vector<std::vector<std::pair<double, double>>> placed;
  for (const Polygon& poly : net.all_polygons()) {
    placed.push_back(placed_polygon(poly));
  }
  return document(placed, "");
}

}  // namespace prismflats
