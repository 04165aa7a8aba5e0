// SVG drawings of nets and surfaces with optional exact-data overlays:
// shaded cylinder footprints, saddle connection chords, and fixed point
// markers.  Purely presentational: coordinates are float embeddings at 100
// units per unit length with y flipped for screen orientation.

#pragma once

#include "prismflats/builders.hpp"
#include "prismflats/engine.hpp"

#include <string>
#include <utility>
#include <vector>

namespace prismflats {

struct RenderOverlays {
  std::vector<Cylinder> cylinders;
  std::vector<SaddleConnection> connections;
  std::vector<std::pair<int, Point2>> markers;  // (polygon, exact position)
};

/// One path per polygon in index order, then shaded cylinder footprints,
/// then connection chords (each drawn per polygon chart it crosses), then
/// circle markers.  Identical input produces identical bytes.
std::string render_surface_svg(const Surface& s, const RenderOverlays& overlays);

/// The net drawing alone: polygons in [center, petals, base] order.
std::string render_net_svg(const NetLayout& net);

}  // namespace prismflats
