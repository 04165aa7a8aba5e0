// Flat surfaces from the right regular n-prism of height 1.
//
// The net is drawn with the center n-gon's bottom edge horizontal from
// (-1/2, 0) to (1/2, 0), the stem (petal 0) directly below it, and the base
// n-gon below the stem as the 180-degree rotation of the center about the
// stem's midpoint (0, -1/2).  Petal j is the unit square attached outside
// center edge j; its edges are indexed 0 = outer, 1 = right side,
// 2 = center-adjacent, 3 = left side.
//
// All coordinates live in Q(zeta_m) with m = lcm(4, 2n).

#pragma once

#include "prismflats/surface.hpp"

#include <memory>
#include <optional>

namespace prismflats {

/// Field housing every coordinate and trig value for the n-prism surfaces.
FieldSpecPtr prism_field(int n);

/// The prism net as a drawing: no gluing, polygons in the order
/// [center, petal 0 .. petal n-1, base].
struct NetLayout {
  int n = 0;
  FieldSpecPtr spec;
  Polygon center;
  std::vector<Polygon> petals;
  int stem_index = 0;  // the petal joining center to base
  Polygon base;

  std::vector<Polygon> all_polygons() const;
};

NetLayout build_net(int n);

/// Quotient surface: one net with petal sides glued within each petal and
/// petal outer edges glued to the base edges by the 180-degree rotation
/// correspondence.  Polygons [center, petal 0..n-1, base].
Surface build_pi(int n);

/// Unfolding: n copies of the net, copy k rotated by 2*pi*k/n and placed
/// disjointly.  Polygons blockwise per copy, [center, petals, base] each.
Surface build_unfolding(int n);

/// Half quotient for even n: center n-gon (with edge midpoints as straight
/// vertices) plus the n outer petal halves.  Polygons [center, half 0..n-1]
/// where half j is the right half of petal j.
Surface build_pi_h(int n);

/// Cut-and-paste refinements with every petal split along its midline and
/// the n-gons' edge midpoints added as straight vertices.  Same surfaces as
/// build_pi / build_unfolding; these presentations serve as covering-map
/// sources onto build_pi_h, whose polygons are half petals.
Surface build_pi_subdivided(int n);
Surface build_unfolding_subdivided(int n);

/// Polygon-level translation covering.  Every source polygon is an exact
/// translate of its image: source.vertex(i) = target.vertex(i + shift) + t.
struct CoveringMap {
  struct PolyImage {
    int target_polygon = -1;
    int vertex_shift = 0;
    Point2 translation;
  };

  std::shared_ptr<const Surface> source;
  std::shared_ptr<const Surface> target;
  int degree = 0;
  std::vector<PolyImage> polygon_map;  // indexed by source polygon
  bool balanced = false;
};

/// The covering tower for n: the degree-n map unfolding(n) -> pi(n), and for
/// even n also pi(n) -> pih(n) of degree 2 and unfolding(n) -> pih(n) of
/// degree 2n (with the subdivided presentations as sources).
std::vector<CoveringMap> covering_maps(int n);

/// Center of the 180-degree rotation identifying center and base: the stem
/// midpoint (0, -1/2), independent of n.
Point2 stem_center(const FieldSpecPtr& spec);

/// Angles cut off a left-side vertex of the center n-gon by the horizontal
/// chord through it: beta above, delta below, as exact fractions of pi.
/// beta = (2j-1)/n, delta = (n-2j-1)/n.  Odd n only; j ranges over
/// 1..2k for n = 4k+3, 1..2k-1 for n = 4k+1, and j = 1 for n = 3.
struct LayerAngles {
  Rational beta_over_pi;
  Rational delta_over_pi;
};
LayerAngles layer_angles(int n, int j);

/// Shift and translation matching src onto tgt as polygons, if any:
/// src.vertex(i) == tgt.vertex(i + shift) + t for all i.
std::optional<CoveringMap::PolyImage> translate_match(const Polygon& src, const Polygon& tgt);

}  // namespace prismflats
