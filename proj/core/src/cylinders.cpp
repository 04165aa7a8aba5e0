#include "prismflats/engine.hpp"

#include "engine_internal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace prismflats {

namespace {

using CoeffKey = std::vector<Rational>;

CoeffKey coeff_key(const FieldElement& x) { return x.coeffs(); }

const FieldElement& fe_min(const FieldElement& a, const FieldElement& b) {
  return sign(b - a) < 0 ? b : a;
}

const FieldElement& fe_max(const FieldElement& a, const FieldElement& b) {
  return sign(b - a) > 0 ? b : a;
}

// Clip a convex polygon against y >= level (keep_sign +1) or y <= level (-1).
std::vector<Point2> clip_half(const std::vector<Point2>& in, const FieldElement& level,
                              int keep_sign) {
  std::vector<Point2> out;
  const int n = static_cast<int>(in.size());
  for (int i = 0; i < n; ++i) {
    const Point2& a = in[i];
    const Point2& b = in[(i + 1) % n];
    const int sa = sign(a.y - level) * keep_sign;
    const int sb = sign(b.y - level) * keep_sign;
    if (sa >= 0) out.push_back(a);
    if ((sa > 0 && sb < 0) || (sa < 0 && sb > 0)) {
      const FieldElement t = (level - a.y) / (b.y - a.y);
      out.push_back(Point2(a.x + t * (b.x - a.x), level));
    }
  }
  return out;
}

// x-extent of the polygon boundary at a height strictly inside its y-range.
std::pair<FieldElement, FieldElement> chord_extent(const Polygon& poly,
                                                   const FieldElement& level) {
  std::optional<FieldElement> xmin, xmax;
  const auto take = [&](const FieldElement& x) {
    if (!xmin || sign(x - *xmin) < 0) xmin = x;
    if (!xmax || sign(x - *xmax) > 0) xmax = x;
  };
  const int k = poly.size();
  for (int i = 0; i < k; ++i) {
    const Point2 a = poly.vertex(i);
    const Point2 b = poly.vertex(i + 1);
    const int sa = sign(a.y - level);
    const int sb = sign(b.y - level);
    if (sa == 0) take(a.x);
    if (sa * sb < 0) {
      const FieldElement t = (level - a.y) / (b.y - a.y);
      take(a.x + t * (b.x - a.x));
    }
  }
  if (!xmin || !xmax || sign(*xmax - *xmin) <= 0) {
    throw SurfaceError("degenerate horizontal chord in cylinder cut");
  }
  return {*xmin, *xmax};
}

struct PolySlabs {
  FieldElement ymin, ymax;
  std::vector<FieldElement> heights;     // strictly interior cut heights, ascending
  std::vector<FieldElement> boundaries;  // ymin, heights..., ymax
  int base = 0;                          // global id of the lowest slab
  int count = 0;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct WalkOutcome {
  bool collision = false;  // the level hit a vertex; retry with another level
  bool closed = false;
  FieldElement circumference;
  Point2 start;
  int polygon = -1;
};

// Follow the rightward horizontal line at the chosen level through the glued
// slabs.  In a cylinder it closes after visiting each slab at most once.
WalkOutcome waist_walk_at(const Surface& s, const std::vector<PolySlabs>& ps,
                          const std::vector<int>& slab_poly,
                          const std::vector<std::vector<int>>& slabs_of_poly, int start_slab,
                          const FieldElement& y0, int component_size) {
  WalkOutcome res;
  res.circumference = FieldElement::zero(s.spec());
  int cur = start_slab;
  FieldElement y = y0;
  for (int steps = 1; steps <= component_size; ++steps) {
    const int p = slab_poly[cur];
    const Polygon& poly = s.polygon(p);
    const int k = poly.size();
    int left_e = -1;
    int right_e = -1;
    for (int i = 0; i < k; ++i) {
      const int sa = sign(poly.vertex(i).y - y);
      const int sb = sign(poly.vertex(i + 1).y - y);
      if (sa == 0) {
        res.collision = true;
        return res;
      }
      if (sa < 0 && sb > 0) right_e = i;
      if (sa > 0 && sb < 0) left_e = i;
    }
    if (left_e < 0 || right_e < 0) throw SurfaceError("waist walk lost the polygon chord");
    const auto edge_x = [&](int e) {
      const Point2 a = poly.vertex(e);
      const Point2 b = poly.vertex(e + 1);
      const FieldElement t = (y - a.y) / (b.y - a.y);
      return a.x + t * (b.x - a.x);
    };
    const FieldElement x_l = edge_x(left_e);
    const FieldElement x_r = edge_x(right_e);
    if (steps == 1) {
      res.start = Point2(x_l, y);
      res.polygon = p;
    }
    res.circumference += x_r - x_l;
    const EdgeRef e{p, right_e};
    y -= s.crossing_translation(e).y;
    const EdgeRef pr = s.partner(e);
    int next = -1;
    for (const int id : slabs_of_poly[pr.polygon]) {
      const int idx = id - ps[pr.polygon].base;
      if (sign(y - ps[pr.polygon].boundaries[idx]) > 0 &&
          sign(ps[pr.polygon].boundaries[idx + 1] - y) > 0) {
        next = id;
        break;
      }
    }
    if (next < 0) throw SurfaceError("waist walk crossed into no slab");
    cur = next;
    if (cur == start_slab && sign(y - y0) == 0) {
      res.closed = true;
      return res;
    }
  }
  return res;
}

std::vector<Cylinder> horizontal_cylinders(const Surface& s, double bound) {
  const FieldSpecPtr& spec = s.spec();
  const FieldElement zero = FieldElement::zero(spec);
  const int np = s.num_polygons();
  for (int p = 0; p < np; ++p) {
    const Polygon& poly = s.polygon(p);
    for (int i = 0; i < poly.size(); ++i) {
      if (sign(cross(poly.edge_vector(i), poly.edge_vector(i + 1))) < 0) {
        throw std::invalid_argument("cylinder decomposition requires convex polygons");
      }
    }
  }

  // Direction-parallel saddle connections up to the bound form the cut locus.
  EnumerationPolicy policy;
  policy.length_bound = bound;
  const auto all = enumerate_saddle_connections(s, policy);
  std::vector<SaddleConnection> horiz;
  for (const auto& sc : all) {
    if (sc.exact_holonomy.y.is_zero()) horiz.push_back(sc);
  }

  // Retrace each connection for its exact footprint.  An interior crossing of
  // a convex polygon is a full-width chord at one height; a collinear piece
  // covers a whole glued edge, which the cut pulls apart.
  std::vector<std::map<CoeffKey, std::pair<FieldElement, int>>> cuts(np);
  std::map<std::pair<int, int>, int> unglued;
  for (int idx = 0; idx < static_cast<int>(horiz.size()); ++idx) {
    std::vector<detail::RaySegment> segs;
    const auto outcome =
        detail::trace_ray(s, horiz[idx].start_corner, horiz[idx].exact_holonomy, bound + 1.0,
                          &segs);
    if (!outcome.hit || !(outcome.hit_point == horiz[idx].exact_holonomy)) {
      throw SurfaceError("cylinder cut retrace diverged from the enumerated connection");
    }
    for (const auto& g : segs) {
      if (g.along_edge >= 0) {
        const EdgeRef pr = s.partner({g.polygon, g.along_edge});
        const std::pair<int, int> sides[2] = {{g.polygon, g.along_edge}, {pr.polygon, pr.edge}};
        for (const auto& er : sides) {
          const auto it = unglued.find(er);
          if (it != unglued.end() && it->second != idx) {
            throw SurfaceError("two parallel connections share a cut edge");
          }
          unglued.emplace(er, idx);
        }
      } else {
        auto& m = cuts[g.polygon];
        const auto key = coeff_key(g.enter.y);
        const auto it = m.find(key);
        if (it == m.end()) {
          m.emplace(key, std::pair<FieldElement, int>{g.enter.y, idx});
        } else if (it->second.second != idx) {
          throw SurfaceError("two parallel connections share a cut chord");
        }
      }
    }
  }

  // Slice every polygon into horizontal slabs between consecutive cut heights.
  std::vector<PolySlabs> ps(np);
  std::vector<int> slab_poly;
  std::vector<FieldElement> slab_area;
  std::vector<Polygon> slab_piece;
  std::vector<std::vector<int>> slabs_of_poly(np);
  for (int p = 0; p < np; ++p) {
    const Polygon& poly = s.polygon(p);
    PolySlabs& sl = ps[p];
    sl.ymin = poly.vertex(0).y;
    sl.ymax = poly.vertex(0).y;
    for (int v = 1; v < poly.size(); ++v) {
      sl.ymin = fe_min(sl.ymin, poly.vertex(v).y);
      sl.ymax = fe_max(sl.ymax, poly.vertex(v).y);
    }
    for (const auto& [key, hv] : cuts[p]) {
      (void)key;
      if (sign(hv.first - sl.ymin) <= 0 || sign(sl.ymax - hv.first) <= 0) {
        throw SurfaceError("cut chord height outside the open polygon range");
      }
      sl.heights.push_back(hv.first);
    }
    std::sort(sl.heights.begin(), sl.heights.end(),
              [](const FieldElement& a, const FieldElement& b) { return sign(a - b) < 0; });
    sl.boundaries.push_back(sl.ymin);
    for (const auto& h : sl.heights) sl.boundaries.push_back(h);
    sl.boundaries.push_back(sl.ymax);
    sl.base = static_cast<int>(slab_poly.size());
    sl.count = static_cast<int>(sl.boundaries.size()) - 1;
    std::vector<Point2> shape(poly.vertices.begin(), poly.vertices.end());
    for (int i = 0; i < sl.count; ++i) {
      auto piece = clip_half(shape, sl.boundaries[i], +1);
      piece = clip_half(piece, sl.boundaries[i + 1], -1);
      slab_poly.push_back(p);
      slab_piece.push_back(Polygon{std::move(piece)});
      slab_area.push_back(polygon_area(slab_piece.back()));
      slabs_of_poly[p].push_back(sl.base + i);
    }
  }
  const int total = static_cast<int>(slab_poly.size());

  // Reglue uncut edges slab by slab, matching height intervals exactly.
  UnionFind uf(total);
  const auto extreme_slab = [&](const EdgeRef& e) {
    const PolySlabs& sl = ps[e.polygon];
    const FieldElement y = s.polygon(e.polygon).vertex(e.edge).y;
    if (sign(y - sl.ymin) == 0) return sl.base;
    if (sign(y - sl.ymax) == 0) return sl.base + sl.count - 1;
    throw SurfaceError("horizontal edge strictly inside a convex polygon");
  };
  for (const auto& [e1, e2] : s.gluings()) {
    if (unglued.count({e1.polygon, e1.edge}) != 0) continue;  // cut apart
    const Polygon& poly = s.polygon(e1.polygon);
    const Point2 a = poly.vertex(e1.edge);
    const Point2 b = poly.vertex(e1.edge + 1);
    if ((b.y - a.y).is_zero()) {
      uf.join(extreme_slab(e1), extreme_slab(e2));
      continue;
    }
    const FieldElement span_lo = fe_min(a.y, b.y);
    const FieldElement span_hi = fe_max(a.y, b.y);
    const FieldElement shift_y = s.crossing_translation(e1).y;
    const PolySlabs& s1 = ps[e1.polygon];
    const PolySlabs& s2 = ps[e2.polygon];
    for (int i = 0; i < s1.count; ++i) {
      const FieldElement o_lo = fe_max(s1.boundaries[i], span_lo);
      const FieldElement o_hi = fe_min(s1.boundaries[i + 1], span_hi);
      if (sign(o_hi - o_lo) <= 0) continue;
      const FieldElement q_lo = o_lo - shift_y;
      const FieldElement q_hi = o_hi - shift_y;
      for (int j = 0; j < s2.count; ++j) {
        const FieldElement v_lo = fe_max(s2.boundaries[j], q_lo);
        const FieldElement v_hi = fe_min(s2.boundaries[j + 1], q_hi);
        if (sign(v_hi - v_lo) <= 0) continue;
        uf.join(s1.base + i, s2.base + j);
      }
    }
  }

  // A cone point not touched by any cut would sit inside a component, which
  // can then not be a flat cylinder.
  std::vector<char> bad(total, 0);
  for (const auto& vc : s.vertex_classes()) {
    if (!vc.singular()) continue;
    bool touched = false;
    for (const Corner& c : vc.corners) {
      const Polygon& poly = s.polygon(c.polygon);
      const FieldElement y = poly.vertex(c.vertex).y;
      if (cuts[c.polygon].count(coeff_key(y)) != 0) {
        touched = true;
        break;
      }
      const int k = poly.size();
      if (unglued.count({c.polygon, c.vertex}) != 0 ||
          unglued.count({c.polygon, (c.vertex + k - 1) % k}) != 0) {
        touched = true;
        break;
      }
    }
    if (touched) continue;
    for (const Corner& c : vc.corners) {
      const FieldElement y = s.polygon(c.polygon).vertex(c.vertex).y;
      const PolySlabs& sl = ps[c.polygon];
      for (int i = 0; i < sl.count; ++i) {
        if (sign(y - sl.boundaries[i]) >= 0 && sign(sl.boundaries[i + 1] - y) >= 0) {
          bad[uf.find(sl.base + i)] = 1;
        }
      }
    }
  }

  // Boundary pieces: cut lips and unglued edges, tallied per component side.
  std::map<int, FieldElement> low_len, high_len;
  std::map<int, std::set<int>> low_scs, high_scs;
  const auto add_piece = [&](std::map<int, FieldElement>& len, std::map<int, std::set<int>>& scs,
                             int root, const FieldElement& piece, int sc_idx) {
    const auto it = len.find(root);
    if (it == len.end()) {
      len.emplace(root, piece);
    } else {
      it->second += piece;
    }
    scs[root].insert(sc_idx);
  };
  for (int p = 0; p < np; ++p) {
    const PolySlabs& sl = ps[p];
    for (int i = 0; i < static_cast<int>(sl.heights.size()); ++i) {
      const auto extent = chord_extent(s.polygon(p), sl.heights[i]);
      const FieldElement width = extent.second - extent.first;
      const int sc_idx = cuts[p].at(coeff_key(sl.heights[i])).second;
      add_piece(low_len, low_scs, uf.find(sl.base + i + 1), width, sc_idx);   // slab above
      add_piece(high_len, high_scs, uf.find(sl.base + i), width, sc_idx);     // slab below
    }
  }
  for (const auto& [er, sc_idx] : unglued) {
    const Polygon& poly = s.polygon(er.first);
    const Point2 a = poly.vertex(er.second);
    const Point2 b = poly.vertex(er.second + 1);
    if (!(b.y - a.y).is_zero()) throw SurfaceError("cut edge is not direction parallel");
    FieldElement width = b.x - a.x;
    if (sign(width) < 0) width = -width;
    const PolySlabs& sl = ps[er.first];
    if (sign(a.y - sl.ymin) == 0) {
      add_piece(low_len, low_scs, uf.find(sl.base), width, sc_idx);
    } else {
      add_piece(high_len, high_scs, uf.find(sl.base + sl.count - 1), width, sc_idx);
    }
  }

  // Assemble components in slab order and certify each candidate.
  std::map<int, std::vector<int>> comps;
  for (int id = 0; id < total; ++id) comps[uf.find(id)].push_back(id);
  std::vector<std::pair<int, int>> order;  // (first slab, root)
  for (const auto& [root, ids] : comps) order.emplace_back(ids.front(), root);
  std::sort(order.begin(), order.end());

  const long thetas[][2] = {{1, 2},  {1, 3},  {2, 5},  {1, 5},  {3, 7},  {2, 7},
                            {1, 7},  {5, 11}, {3, 11}, {2, 11}, {7, 13}, {1, 13}};
  std::vector<Cylinder> out;
  for (const auto& [first_slab, root] : order) {
    if (bad[root]) continue;
    const auto& ids = comps[root];
    const auto lit = low_len.find(root);
    const auto hit = high_len.find(root);
    if (lit == low_len.end() || hit == high_len.end()) continue;  // no boundary: not cut out

    WalkOutcome walk;
    bool settled = false;
    for (const auto& th : thetas) {
      Rational theta(th[0], th[1]);
      theta.canonicalize();
      const PolySlabs& sl = ps[slab_poly[first_slab]];
      const int local = first_slab - sl.base;
      const FieldElement y0 =
          sl.boundaries[local] + FieldElement::from_rational(spec, theta) *
                                     (sl.boundaries[local + 1] - sl.boundaries[local]);
      walk = waist_walk_at(s, ps, slab_poly, slabs_of_poly, first_slab, y0,
                           static_cast<int>(ids.size()));
      if (!walk.collision) {
        settled = true;
        break;
      }
    }
    if (!settled) throw SurfaceError("no generic waist level found for a component");
    if (!walk.closed) continue;
    if (sign(walk.circumference) <= 0) throw SurfaceError("waist closed with nonpositive length");
    if (sign(lit->second - walk.circumference) != 0) continue;
    if (sign(hit->second - walk.circumference) != 0) continue;

    FieldElement area = zero;
    for (const int id : ids) area += slab_area[id];

    Cylinder cyl;
    cyl.direction = Direction::kHorizontal;
    cyl.circumference = walk.circumference;
    cyl.height = area / walk.circumference;
    cyl.modulus = cyl.height / walk.circumference;
    for (const int sc_idx : low_scs[root]) cyl.boundary_low.push_back(horiz[sc_idx]);
    for (const int sc_idx : high_scs[root]) cyl.boundary_high.push_back(horiz[sc_idx]);
    for (const int id : ids) cyl.footprint.emplace_back(slab_poly[id], slab_piece[id]);
    cyl.waist.polygon = walk.polygon;
    cyl.waist.start = walk.start;
    cyl.waist.holonomy = Point2(walk.circumference, zero);
    cyl.waist.closes = true;
    out.push_back(std::move(cyl));
  }

  std::stable_sort(out.begin(), out.end(), [](const Cylinder& a, const Cylinder& b) {
    const int sc = sign(a.circumference - b.circumference);
    if (sc != 0) return sc < 0;
    return sign(a.height - b.height) < 0;
  });
  return out;
}

}  // namespace

std::vector<Cylinder> cylinders_in_direction(const Surface& s, Direction dir,
                                             double boundary_bound) {
  if (!(boundary_bound > 0) || !std::isfinite(boundary_bound)) {
    throw std::invalid_argument("cylinder boundary bound must be positive and finite");
  }
  if (dir == Direction::kHorizontal) return horizontal_cylinders(s, boundary_bound);

  // Vertical cylinders are the horizontal ones of the quarter-turned surface.
  const FieldSpecPtr& spec = s.spec();
  const FieldElement one = FieldElement::one(spec);
  const FieldElement zero = FieldElement::zero(spec);
  const Mat2 cw{zero, one, -one, zero};          // (x, y) -> (y, -x)
  const Mat2 ccw = rotation_quarter(spec);       // inverse of cw
  const Surface turned = transform(s, cw);
  std::vector<Cylinder> out = horizontal_cylinders(turned, boundary_bound);
  for (Cylinder& cyl : out) {
    cyl.direction = Direction::kVertical;
    const auto map_back = [&](SaddleConnection& sc) {
      sc.exact_holonomy = ccw.apply(sc.exact_holonomy);
      sc.dx = approx_double(sc.exact_holonomy.x);
      sc.dy = approx_double(sc.exact_holonomy.y);
      sc.length = std::hypot(sc.dx, sc.dy);
    };
    for (auto& sc : cyl.boundary_low) map_back(sc);
    for (auto& sc : cyl.boundary_high) map_back(sc);
    cyl.waist.start = ccw.apply(cyl.waist.start);
    cyl.waist.holonomy = ccw.apply(cyl.waist.holonomy);
    for (auto& pr : cyl.footprint) {
      for (Point2& v : pr.second.vertices) v = ccw.apply(v);
    }
  }
  return out;
}

}  // namespace prismflats
