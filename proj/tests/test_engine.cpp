#include "prismflats/engine.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prismflats/builders.hpp"
#include "prismflats/surface.hpp"

namespace prismflats {
namespace {

// ---------------------------------------------------------------------------
// Independent oracle: a plain-rational ray walker for surfaces whose vertex
// coordinates are all rational.  It shares nothing with the engine's wedge
// search; every step is brute-force exact mpq arithmetic.

struct QP {
  Rational x, y;
};

QP operator+(const QP& a, const QP& b) { return {a.x + b.x, a.y + b.y}; }
QP operator-(const QP& a, const QP& b) { return {a.x - b.x, a.y - b.y}; }
Rational qcross(const QP& a, const QP& b) { return a.x * b.y - a.y * b.x; }
Rational qdot(const QP& a, const QP& b) { return a.x * b.x + a.y * b.y; }

QP rational_point(const Point2& p) {
  const auto px = p.x.as_rational();
  const auto py = p.y.as_rational();
  if (!px || !py) throw std::logic_error("oracle needs rational coordinates");
  return {*px, *py};
}

struct QSurface {
  const Surface& s;
  std::vector<std::vector<QP>> verts;
  std::vector<std::vector<QP>> xlat;

  explicit QSurface(const Surface& surface) : s(surface) {
    verts.resize(s.num_polygons());
    xlat.resize(s.num_polygons());
    for (int p = 0; p < s.num_polygons(); ++p) {
      const Polygon& poly = s.polygon(p);
      for (int v = 0; v < poly.size(); ++v) {
        verts[p].push_back(rational_point(poly.vertex(v)));
        xlat[p].push_back(rational_point(s.crossing_translation({p, v})));
      }
    }
  }

  QP edge(int p, int i) const {
    const int k = static_cast<int>(verts[p].size());
    return verts[p][(i + 1) % k] - verts[p][i];
  }
};

// Half-open sector [outgoing edge, reversed incoming edge) at a corner.
bool q_arc_contains(const QSurface& qs, const Corner& c, const QP& dir) {
  const int k = static_cast<int>(qs.verts[c.polygon].size());
  const QP out = qs.edge(c.polygon, c.vertex);
  const Rational c1 = qcross(out, dir);
  if (c1 < 0) return false;
  if (c1 == 0) return qdot(out, dir) > 0;
  const QP in = qs.edge(c.polygon, (c.vertex + k - 1) % k);
  const QP in_rev{-in.x, -in.y};
  return qcross(dir, in_rev) > 0;
}

struct QHit {
  bool hit = false;
  QP point{};
  int cls = -1;
};

// First singular vertex on the ray  t -> t * dir  from the corner's cone
// point, within squared length max_len2.  Regular vertices are passed
// through and travel along edges is handled.
QHit q_trace(const QSurface& qs, const Corner& start, const QP& dir, const Rational& max_len2) {
  const Surface& s = qs.s;
  int poly = start.polygon;
  QP t{-qs.verts[poly][start.vertex].x, -qs.verts[poly][start.vertex].y};
  bool at_vertex = true;
  int touch = start.vertex;
  Rational s_cur = 0;
  const Rational dd = qdot(dir, dir);

  for (int step = 0; step < 100000; ++step) {
    const int k = static_cast<int>(qs.verts[poly].size());
    bool found = false;
    Rational best_s;
    int best_vertex = -1;
    int best_edge = -1;
    const auto consider = [&](const Rational& sv, int vertex, int edge) {
      if (sv <= s_cur) return;
      if (!found || sv < best_s || (sv == best_s && best_vertex < 0 && vertex >= 0)) {
        found = true;
        best_s = sv;
        best_vertex = vertex;
        best_edge = edge;
      }
    };
    for (int i = 0; i < k; ++i) {
      if (!at_vertex && i == touch) continue;
      const int j = (i + 1) % k;
      const QP a = qs.verts[poly][i] + t;
      const QP e = qs.edge(poly, i);
      const Rational den = qcross(dir, e);
      if (den == 0) {
        if (qcross(a, dir) != 0) continue;
        consider(qdot(qs.verts[poly][i] + t, dir) / dd, i, i);
        consider(qdot(qs.verts[poly][j] + t, dir) / dd, j, i);
        continue;
      }
      const Rational sv = qcross(a, e) / den;
      const Rational r = qcross(a, dir) / den;
      if (r < 0 || r > 1) continue;
      consider(sv, r == 0 ? i : (r == 1 ? j : -1), i);
    }
    if (!found) throw std::logic_error("oracle ray found no exit");
    const QP h{best_s * dir.x, best_s * dir.y};
    if (h.x * h.x + h.y * h.y > max_len2) return {};
    if (best_vertex >= 0) {
      const int cls = s.vertex_class_of({poly, best_vertex});
      if (s.vertex_classes()[cls].singular()) return {true, h, cls};
      // walk around the regular vertex to the sector holding dir
      Corner c{poly, best_vertex};
      QP tc = t;
      bool contained = false;
      const std::size_t corners = s.vertex_classes()[cls].corners.size();
      for (std::size_t visit = 0; visit <= corners; ++visit) {
        if (q_arc_contains(qs, c, dir)) {
          contained = true;
          break;
        }
        const int kk = static_cast<int>(qs.verts[c.polygon].size());
        const int prev = (c.vertex + kk - 1) % kk;
        tc = tc + qs.xlat[c.polygon][prev];
        c = next_corner_around_vertex(s, c);
      }
      if (!contained) throw std::logic_error("oracle lost the direction at a regular vertex");
      poly = c.polygon;
      t = tc;
      at_vertex = true;
      touch = c.vertex;
      s_cur = best_s;
      continue;
    }
    t = t + qs.xlat[poly][best_edge];
    const EdgeRef pr = s.partner({poly, best_edge});
    poly = pr.polygon;
    at_vertex = false;
    touch = pr.edge;
    s_cur = best_s;
  }
  throw std::logic_error("oracle ray exceeded its step budget");
}

// Key for one unoriented connection: start class, end class, holonomy doubled
// to integers.  The surfaces fed to the oracle have coordinates in (1/2)Z^2.
std::string connection_key(int start_cls, int end_cls, const Rational& hx, const Rational& hy) {
  Rational dx = 2 * hx;
  Rational dy = 2 * hy;
  dx.canonicalize();
  dy.canonicalize();
  if (dx.get_den() != 1 || dy.get_den() != 1) throw std::logic_error("holonomy not half-integral");
  return std::to_string(start_cls) + ":" + std::to_string(end_cls) + ":" + dx.get_num().get_str() +
         ":" + dy.get_num().get_str();
}

// All saddle connections of length <= len_bound by brute lattice walk, keyed
// as above, with the same canonical orientation rule as the engine.
std::map<std::string, int> oracle_connections(const Surface& s, long len_bound) {
  const QSurface qs(s);
  const Rational max_len2 = Rational(len_bound) * Rational(len_bound);
  const long r = 2 * len_bound;  // primitive directions (p, q), |(p,q)| <= 2L
  std::map<std::string, int> out;
  for (std::size_t cls = 0; cls < s.vertex_classes().size(); ++cls) {
    if (!s.vertex_classes()[cls].singular()) continue;
    for (const Corner& corner : s.vertex_classes()[cls].corners) {
      for (long p = -r; p <= r; ++p) {
        for (long q = -r; q <= r; ++q) {
          if (p == 0 && q == 0) continue;
          if (p * p + q * q > r * r) continue;
          if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
          const QP dir{Rational(p), Rational(q)};
          if (!q_arc_contains(qs, corner, dir)) continue;
          const QHit hit = q_trace(qs, corner, dir, max_len2);
          if (!hit.hit) continue;
          // canonical orientation: keep dy > 0, or dy = 0 and dx > 0
          if (hit.point.y < 0 || (hit.point.y == 0 && hit.point.x <= 0)) continue;
          ++out[connection_key(static_cast<int>(cls), hit.cls, hit.point.x, hit.point.y)];
        }
      }
    }
  }
  return out;
}

std::map<std::string, int> engine_connections(const Surface& s, double len_bound) {
  EnumerationPolicy policy;
  policy.length_bound = len_bound;
  const auto list = enumerate_saddle_connections(s, policy);
  const auto classes = cone_point_classes(s);
  std::map<std::string, int> out;
  for (const auto& sc : list) {
    const auto hx = sc.exact_holonomy.x.as_rational();
    const auto hy = sc.exact_holonomy.y.as_rational();
    if (!hx || !hy) throw std::logic_error("engine holonomy not rational on this surface");
    ++out[connection_key(classes[sc.start_cp], classes[sc.end_cp], *hx, *hy)];
  }
  return out;
}

std::string elem_key(const FieldElement& x) {
  std::string out;
  for (const auto& c : x.coeffs()) {
    out += c.get_str();
    out += ",";
  }
  return out;
}

Corner find_corner_containing(const Surface& s, const Point2& dir) {
  for (const auto& vc : s.vertex_classes()) {
    if (!vc.singular()) continue;
    for (const Corner& c : vc.corners) {
      const Polygon& poly = s.polygon(c.polygon);
      const Point2 out = poly.edge_vector(c.vertex);
      const int c1 = sign(cross(out, dir));
      if (c1 < 0) continue;
      if (c1 == 0) {
        if (sign(dot(out, dir)) > 0) return c;
        continue;
      }
      if (sign(cross(dir, -poly.edge_vector(c.vertex - 1))) > 0) return c;
    }
  }
  throw std::logic_error("no singular corner contains the direction");
}

TEST(SaddleOracle, SquarePrismUnfoldingMatchesLatticeWalkAtLengthFive) {
  const Surface u = build_unfolding(4);
  const auto expected = oracle_connections(u, 5);
  const auto actual = engine_connections(u, 5.0);
  ASSERT_FALSE(expected.empty());
  EXPECT_EQ(expected, actual);
}

TEST(SaddleOracle, SquarePrismQuotientMatchesLatticeWalk) {
  const Surface q = build_pi(4);
  const auto expected = oracle_connections(q, 2);
  const auto actual = engine_connections(q, 2.0);
  ASSERT_FALSE(expected.empty());
  EXPECT_EQ(expected, actual);
}

TEST(Trace, StemBottomEdgeHitsAtExactlyUnitDistance) {
  for (const int n : {5, 6}) {
    const Surface s = build_pi(n);
    const auto spec = s.spec();
    // petal 0 is the stem; its corner 0 sits at the bottom-left.
    const Point2 right(FieldElement::one(spec), FieldElement::zero(spec));
    const TraceResult res = trace_separatrix(s, {1, 0}, right, 50.0);
    ASSERT_TRUE(res.hit) << "n=" << n;
    EXPECT_EQ(res.exact_distance_sq, FieldElement::one(spec)) << "n=" << n;
    EXPECT_NEAR(res.distance, 1.0, 1e-12);
    EXPECT_GE(res.end_cp, 0);
  }
}

TEST(Trace, PassesStraightThroughRegularVertex) {
  // On the half quotient the horizontal ray from the first center vertex runs
  // through the regular edge-midpoint vertex and only stops at the next cone
  // point, at distance exactly 1.
  const Surface s = build_pi_h(6);
  const auto spec = s.spec();
  const Point2 right(FieldElement::one(spec), FieldElement::zero(spec));
  const TraceResult res = trace_separatrix(s, {0, 0}, right, 10.0);
  ASSERT_TRUE(res.hit);
  EXPECT_EQ(res.exact_distance_sq, FieldElement::one(spec));
  EXPECT_NEAR(res.distance, 1.0, 1e-12);
}

TEST(Trace, IrrationalSlopeSurvivesPastFifty) {
  // Holonomies on the square-tiled unfolding are half-integral, so a ray of
  // slope sqrt(2) can never end on a cone point: it must survive any bound.
  const Surface u = build_unfolding(4);
  const auto spec = u.spec();
  const FieldElement sqrt2 =
      FieldElement::zeta_power(spec, 1) - FieldElement::zeta_power(spec, 3);
  const Point2 dir(FieldElement::one(spec), sqrt2);
  const Corner corner = find_corner_containing(u, dir);
  const TraceResult res = trace_separatrix(u, corner, dir, 50.0);
  EXPECT_FALSE(res.hit);
}

TEST(Trace, HorizontalSeparatricesOnSquareUnfoldingHitAtIntegerDistances) {
  const Surface u = build_unfolding(4);
  const auto spec = u.spec();
  const FieldElement one = FieldElement::one(spec);
  const FieldElement zero = FieldElement::zero(spec);
  int traced = 0;
  for (const auto& vc : u.vertex_classes()) {
    if (!vc.singular()) continue;
    for (const Corner& c : vc.corners) {
      for (const Point2& dir : {Point2(one, zero), Point2(-one, zero)}) {
        const Polygon& poly = u.polygon(c.polygon);
        const Point2 out = poly.edge_vector(c.vertex);
        const int c1 = sign(cross(out, dir));
        bool contained = false;
        if (c1 == 0) {
          contained = sign(dot(out, dir)) > 0;
        } else if (c1 > 0) {
          contained = sign(cross(dir, -poly.edge_vector(c.vertex - 1))) > 0;
        }
        if (!contained) continue;
        const TraceResult res = trace_separatrix(u, c, dir, 100.0);
        ASSERT_TRUE(res.hit);
        const auto d2 = res.exact_distance_sq.as_rational();
        ASSERT_TRUE(d2.has_value());
        ASSERT_EQ(d2->get_den(), 1);
        const mpz_class root = sqrt(d2->get_num());
        EXPECT_EQ(root * root, d2->get_num());
        ++traced;
      }
    }
  }
  EXPECT_GT(traced, 0);
}

TEST(Trace, RejectsDirectionsOutsideTheSector) {
  const Surface s = build_pi(5);
  const auto spec = s.spec();
  const FieldElement one = FieldElement::one(spec);
  const FieldElement zero = FieldElement::zero(spec);
  // Stem corner 0 owns [(1,0), (0,1)): the left boundary belongs to it, the
  // right boundary belongs to the next corner, and the reverse is outside.
  EXPECT_NO_THROW(trace_separatrix(s, {1, 0}, Point2(one, zero), 2.0));
  EXPECT_THROW(trace_separatrix(s, {1, 0}, Point2(zero, one), 2.0), std::invalid_argument);
  EXPECT_THROW(trace_separatrix(s, {1, 0}, Point2(-one, zero), 2.0), std::invalid_argument);
  EXPECT_THROW(trace_separatrix(s, {1, 0}, Point2(zero, zero), 2.0), std::invalid_argument);
}

TEST(Enumerate, SortedCanonicalAndInternallyConsistent) {
  const Surface s = build_pi(5);
  EnumerationPolicy policy;
  policy.length_bound = 4.0;
  const auto list = enumerate_saddle_connections(s, policy);
  ASSERT_FALSE(list.empty());
  // shortest connections are the unit polygon edges
  EXPECT_EQ(list.front().exact_length_sq, FieldElement::one(s.spec()));
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& sc = list[i];
    if (i > 0) {
      EXPECT_GE(sc.length, list[i - 1].length);
    }
    const int sy = sign(sc.exact_holonomy.y);
    EXPECT_TRUE(sy > 0 || (sy == 0 && sign(sc.exact_holonomy.x) > 0));
    EXPECT_NEAR(sc.length * sc.length, sc.dx * sc.dx + sc.dy * sc.dy, 1e-12);
    EXPECT_NEAR(sc.dx, approx_double(sc.exact_holonomy.x), 1e-12);
    EXPECT_NEAR(sc.dy, approx_double(sc.exact_holonomy.y), 1e-12);
    EXPECT_NEAR(approx_double(sc.exact_length_sq), sc.length * sc.length, 1e-9);
    EXPECT_GE(sc.start_cp, 0);
    EXPECT_GE(sc.end_cp, 0);
  }
}

TEST(Enumerate, DuplicateFreeOnQuotientAndUnfolding) {
  // Distinct congruent connections may share endpoint classes and holonomy,
  // so the germ (start corner, holonomy) is the key that must be unique.
  for (const auto& [surface, bound] :
       {std::pair<Surface, double>{build_pi(5), 4.0}, {build_unfolding(3), 3.0},
        {build_pi_h(12), 1.5}}) {
    EnumerationPolicy policy;
    policy.length_bound = bound;
    const auto list = enumerate_saddle_connections(surface, policy);
    ASSERT_FALSE(list.empty());
    std::map<std::string, int> keys;
    for (const auto& sc : list) {
      ++keys[std::to_string(sc.start_corner.polygon) + "," +
             std::to_string(sc.start_corner.vertex) + "|" + elem_key(sc.exact_holonomy.x) + "|" +
             elem_key(sc.exact_holonomy.y)];
    }
    for (const auto& [key, count] : keys) {
      EXPECT_EQ(count, 1) << key;
    }
  }
}

TEST(Enumerate, HolonomyMultisetIsMirrorSymmetric) {
  for (const int n : {3, 5, 6}) {
    const Surface s = build_pi(n);
    EnumerationPolicy policy;
    policy.length_bound = 4.0;
    const auto list = enumerate_saddle_connections(s, policy);
    ASSERT_FALSE(list.empty());
    std::map<std::pair<std::string, std::string>, int> holonomies;
    for (const auto& sc : list) {
      ++holonomies[{elem_key(sc.exact_holonomy.x), elem_key(sc.exact_holonomy.y)}];
    }
    for (const auto& [key, count] : holonomies) {
      (void)key;
      EXPECT_GT(count, 0);
    }
    for (const auto& sc : list) {
      std::pair<std::string, std::string> mirror;
      if (sc.exact_holonomy.y.is_zero()) {
        mirror = {elem_key(sc.exact_holonomy.x), elem_key(sc.exact_holonomy.y)};
      } else {
        mirror = {elem_key(-sc.exact_holonomy.x), elem_key(sc.exact_holonomy.y)};
      }
      const auto it = holonomies.find(mirror);
      ASSERT_NE(it, holonomies.end()) << "n=" << n;
      const std::pair<std::string, std::string> self{elem_key(sc.exact_holonomy.x),
                                                     elem_key(sc.exact_holonomy.y)};
      EXPECT_EQ(it->second, holonomies[self]) << "n=" << n;
    }
  }
}

TEST(Enumerate, TinyBudgetReportsIncompleteness) {
  const Surface s = build_pi(5);
  EnumerationPolicy policy;
  policy.length_bound = 2.0;
  policy.max_developed_polygons = 3;
  EXPECT_THROW(enumerate_saddle_connections(s, policy), EnumerationIncompleteError);
}

TEST(Enumerate, PolicyInvariantsAreEnforced) {
  const Surface s = build_pi(3);
  EnumerationPolicy policy;
  policy.length_bound = 0.0;
  EXPECT_THROW(enumerate_saddle_connections(s, policy), std::invalid_argument);
  policy.length_bound = 2.0;
  policy.tolerance = 1e-3;
  policy.exact_confirm_band = 1e-6;  // band below tolerance
  EXPECT_THROW(enumerate_saddle_connections(s, policy), std::invalid_argument);
  policy.tolerance = 1e-9;
  policy.exact_confirm_band = 3.0;  // band above the length bound
  EXPECT_THROW(enumerate_saddle_connections(s, policy), std::invalid_argument);
  policy.exact_confirm_band = 1e-6;
  policy.max_developed_polygons = 0;
  EXPECT_THROW(enumerate_saddle_connections(s, policy), std::invalid_argument);
}

TEST(UnitCount, PrismFamilies) {
  EXPECT_EQ(count_unit_saddle_connections(build_pi(7), Direction::kHorizontal), 2);
  EXPECT_EQ(count_unit_saddle_connections(build_pi_h(6), Direction::kHorizontal), 2);
  EXPECT_EQ(count_unit_saddle_connections(build_pi_h(12), Direction::kHorizontal), 3);
}

TEST(UnitCount, BothReadingsAreReported) {
  const UnitCounts counts = unit_saddle_connection_counts(build_pi(5));
  EXPECT_EQ(counts.horizontal, 2);
  EXPECT_EQ(counts.total, counts.horizontal + counts.vertical);
  EXPECT_GT(counts.vertical, 0);
}

TEST(Csv, HeaderAndRowsEchoTheConnections) {
  const Surface s = build_pi(4);
  EnumerationPolicy policy;
  policy.length_bound = 1.5;
  const auto list = enumerate_saddle_connections(s, policy);
  ASSERT_FALSE(list.empty());
  const std::string csv = saddle_connections_to_csv(list);
  EXPECT_EQ(csv.rfind("length,dx,dy,start_cp,end_cp\n", 0), 0u);
  const std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
  EXPECT_EQ(rows, list.size() + 1);
  // byte-stable
  EXPECT_EQ(csv, saddle_connections_to_csv(list));
}

}  // namespace
}  // namespace prismflats
