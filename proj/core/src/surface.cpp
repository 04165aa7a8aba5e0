#include "prismflats/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace prismflats {

Mat2 rotation(const FieldSpecPtr& spec, long k, long n) {
  // cos(2*pi*k/n) = cos((2k)*pi/n), same for sin.
  const FieldElement c = trig_element(TrigKind::kCos, 2 * k, n, spec);
  const FieldElement s = trig_element(TrigKind::kSin, 2 * k, n, spec);
  return Mat2{c, -s, s, c};
}

Mat2 rotation_quarter(const FieldSpecPtr& spec) {
  const FieldElement z = FieldElement::zero(spec);
  const FieldElement o = FieldElement::one(spec);
  return Mat2{z, -o, o, z};
}

FieldElement polygon_area(const Polygon& poly) {
  FieldElement twice = FieldElement::zero(poly.vertices.at(0).x.spec());
  for (int i = 0; i < poly.size(); ++i) twice += cross(poly.vertex(i), poly.vertex(i + 1));
  return twice * Rational(1, 2);
}

Point2 polygon_centroid(const Polygon& poly) {
  Point2 sum = Point2::zero(poly.vertices.at(0).x.spec());
  for (const Point2& v : poly.vertices) sum += v;
  return Rational(1, poly.size()) * sum;
}

Polygon translate(const Polygon& poly, const Point2& t) {
  Polygon out = poly;
  for (Point2& v : out.vertices) v += t;
  return out;
}

Polygon transform(const Polygon& poly, const Mat2& map) {
  Polygon out = poly;
  for (Point2& v : out.vertices) v = map.apply(v);
  return out;
}

std::vector<std::string> validate_presentation(
    const std::string& label, const FieldSpecPtr& spec, const std::vector<Polygon>& polygons,
    const std::vector<std::pair<EdgeRef, EdgeRef>>& gluings) {
  std::vector<std::string> bad;
  const auto edge_name = [](EdgeRef e) {
    return "(" + std::to_string(e.polygon) + "," + std::to_string(e.edge) + ")";
  };
  if (!spec) {
    bad.push_back(label + ": null field spec");
    return bad;
  }
  if (polygons.empty()) {
    bad.push_back(label + ": no polygons");
    return bad;
  }
  const int np = static_cast<int>(polygons.size());
  for (int p = 0; p < np; ++p) {
    const Polygon& poly = polygons[p];
    if (poly.size() < 3) {
      bad.push_back(label + ": polygon " + std::to_string(p) + " has fewer than 3 vertices");
      continue;
    }
    bool coords_ok = true;
    for (const Point2& v : poly.vertices) {
      if (!v.x.valid() || !v.y.valid() || v.x.spec().get() != spec.get() ||
          v.y.spec().get() != spec.get()) {
        bad.push_back(label + ": polygon " + std::to_string(p) +
                      " has a coordinate on a foreign field spec");
        coords_ok = false;
        break;
      }
    }
    if (!coords_ok) continue;
    bool shape_ok = true;
    for (int i = 0; i < poly.size() && shape_ok; ++i) {
      const Point2 prev = poly.edge_vector(i - 1);
      const Point2 cur = poly.edge_vector(i);
      if (cur.x.is_zero() && cur.y.is_zero()) {
        bad.push_back(label + ": zero-length edge " + edge_name({p, i}));
        shape_ok = false;
        break;
      }
      // Counterclockwise and convex; a straight corner (collinear, forward)
      // is allowed, a reversal is not.
      const int turn = sign(cross(prev, cur));
      if (turn < 0 || (turn == 0 && sign(dot(prev, cur)) <= 0)) {
        bad.push_back(label + ": polygon " + std::to_string(p) +
                      " not convex counterclockwise at vertex " + std::to_string(i));
        shape_ok = false;
      }
    }
    if (shape_ok && sign(polygon_area(poly)) <= 0) {
      bad.push_back(label + ": polygon " + std::to_string(p) + " has nonpositive area");
    }
  }
  if (!bad.empty()) return bad;

  std::vector<std::vector<int>> seen(np);
  for (int p = 0; p < np; ++p) seen[p].assign(polygons[p].size(), 0);
  bool refs_ok = true;
  for (const auto& [a, b] : gluings) {
    bool pair_ok = true;
    for (const EdgeRef e : {a, b}) {
      if (e.polygon < 0 || e.polygon >= np || e.edge < 0 || e.edge >= polygons[e.polygon].size()) {
        bad.push_back(label + ": gluing references edge " + edge_name(e) + " out of range");
        pair_ok = false;
        refs_ok = false;
      }
    }
    if (!pair_ok) continue;
    if (a == b) bad.push_back(label + ": edge " + edge_name(a) + " glued to itself");
    ++seen[a.polygon][a.edge];
    ++seen[b.polygon][b.edge];
  }
  if (!refs_ok) return bad;
  for (int p = 0; p < np; ++p) {
    for (int e = 0; e < polygons[p].size(); ++e) {
      if (seen[p][e] == 0) bad.push_back(label + ": edge unmatched " + edge_name({p, e}));
      if (seen[p][e] > 1) bad.push_back(label + ": edge " + edge_name({p, e}) + " glued twice");
    }
  }
  for (const auto& [a, b] : gluings) {
    const Point2 sum = polygons[a.polygon].edge_vector(a.edge) +
                       polygons[b.polygon].edge_vector(b.edge);
    if (!sum.x.is_zero() || !sum.y.is_zero()) {
      bad.push_back(label + ": gluing not a translation " + edge_name(a) + "~" + edge_name(b));
    }
  }
  return bad;
}

Surface::Surface(std::string label, FieldSpecPtr spec, std::vector<Polygon> polygons,
                 std::vector<std::pair<EdgeRef, EdgeRef>> gluings)
    : label_(std::move(label)),
      spec_(std::move(spec)),
      polygons_(std::move(polygons)),
      gluings_(std::move(gluings)) {
  const std::vector<std::string> bad =
      validate_presentation(label_, spec_, polygons_, gluings_);
  if (!bad.empty()) {
    std::string msg = "invalid surface presentation";
    for (const std::string& b : bad) msg += "\n  " + b;
    throw SurfaceError(msg);
  }
  partner_.resize(polygons_.size());
  for (size_t p = 0; p < polygons_.size(); ++p) {
    partner_[p].assign(polygons_[p].size(), EdgeRef{});
  }
  for (const auto& [a, b] : gluings_) {
    partner_[a.polygon][a.edge] = b;
    partner_[b.polygon][b.edge] = a;
  }
  float_vertices_.resize(polygons_.size());
  for (size_t p = 0; p < polygons_.size(); ++p) {
    for (const Point2& v : polygons_[p].vertices) {
      float_vertices_[p].push_back(approx_point(v));
    }
  }
  build_vertex_classes();
}

EdgeRef Surface::partner(EdgeRef e) const { return partner_.at(e.polygon).at(e.edge); }

Point2 Surface::crossing_translation(EdgeRef e) const {
  const EdgeRef f = partner(e);
  return polygons_[e.polygon].vertex(e.edge + 1) - polygons_[f.polygon].vertex(f.edge);
}

Corner next_corner_around_vertex(const Surface& s, Corner c) {
  const int k = s.polygon(c.polygon).size();
  const EdgeRef incoming{c.polygon, ((c.vertex - 1) % k + k) % k};
  const EdgeRef f = s.partner(incoming);
  return Corner{f.polygon, f.edge};
}

namespace {

// Half-open membership: does the arc from u counterclockwise to w (interior
// angle of a convex corner, so at most pi), including u and excluding w,
// contain the direction r?  Consecutive corner arcs around a vertex share
// endpoints, so summing this over a class counts full turns exactly.
bool arc_contains(const Point2& u, const Point2& w, const Point2& r) {
  const FieldElement cu = cross(u, r);
  if (cu.is_zero() && sign(dot(u, r)) > 0) return true;
  return sign(cu) > 0 && sign(cross(r, w)) > 0;
}

}  // namespace

void Surface::build_vertex_classes() {
  class_of_corner_.resize(polygons_.size());
  for (size_t p = 0; p < polygons_.size(); ++p) {
    class_of_corner_[p].assign(polygons_[p].size(), -1);
  }
  const Point2 ref(FieldElement::one(spec_), FieldElement::zero(spec_));
  for (int p = 0; p < num_polygons(); ++p) {
    for (int v = 0; v < polygons_[p].size(); ++v) {
      if (class_of_corner_[p][v] != -1) continue;
      const int id = static_cast<int>(classes_.size());
      VertexClass cls;
      double float_angle = 0.0;
      Corner c{p, v};
      int guard = 0;
      do {
        if (class_of_corner_[c.polygon][c.vertex] != -1) {
          throw SurfaceError(label_ + ": vertex walk crossed into a finished class");
        }
        class_of_corner_[c.polygon][c.vertex] = id;
        cls.corners.push_back(c);
        const Polygon& poly = polygons_[c.polygon];
        const Point2 u = poly.edge_vector(c.vertex);
        const Point2 w = -poly.edge_vector(c.vertex - 1);
        if (arc_contains(u, w, ref)) ++cls.turns;
        // Float cross-check of the corner angle; the interior angle of a
        // convex corner is atan2 of (cross, dot) in (0, pi].
        const auto& fv = float_vertices_[c.polygon];
        const int k = poly.size();
        const double ux = fv[(c.vertex + 1) % k].first - fv[c.vertex].first;
        const double uy = fv[(c.vertex + 1) % k].second - fv[c.vertex].second;
        const double wx = fv[(c.vertex + k - 1) % k].first - fv[c.vertex].first;
        const double wy = fv[(c.vertex + k - 1) % k].second - fv[c.vertex].second;
        double ang = std::atan2(ux * wy - uy * wx, ux * wx + uy * wy);
        if (ang < 0) ang += 2 * std::numbers::pi;
        float_angle += ang;
        c = next_corner_around_vertex(*this, c);
        if (++guard > 4 * num_edge_pairs() + 4) {
          throw SurfaceError(label_ + ": vertex walk does not close");
        }
      } while (c != Corner{p, v});
      if (cls.turns < 1) throw SurfaceError(label_ + ": vertex class with zero angle");
      const double residual =
          std::abs(float_angle - 2 * std::numbers::pi * std::round(float_angle / (2 * std::numbers::pi)));
      if (residual >= 1e-9) {
        throw SurfaceError(label_ + ": cone angle not a multiple of 2 pi (residual " +
                           std::to_string(residual) + ")");
      }
      if (std::lround(float_angle / (2 * std::numbers::pi)) != cls.turns) {
        throw SurfaceError(label_ + ": float and exact cone angle disagree");
      }
      classes_.push_back(std::move(cls));
    }
  }
  // Euler characteristic and total cone angle must tell the same story.
  const int V = static_cast<int>(classes_.size());
  const int E = num_edge_pairs();
  const int F = num_polygons();
  const int chi = V - E + F;
  if (chi % 2 != 0 || chi > 2) throw SurfaceError(label_ + ": bad Euler characteristic");
  int excess = 0;
  for (const VertexClass& cls : classes_) excess += cls.turns - 1;
  if (excess != -chi) {
    throw SurfaceError(label_ + ": cone angles disagree with Euler characteristic");
  }
}

int Surface::vertex_class_of(Corner c) const {
  return class_of_corner_.at(c.polygon).at(c.vertex);
}

std::vector<int> Surface::stratum() const {
  std::vector<int> orders;
  for (const VertexClass& cls : classes_) {
    if (cls.turns > 1) orders.push_back(cls.turns - 1);
  }
  std::sort(orders.rbegin(), orders.rend());
  return orders;
}

int Surface::genus() const {
  const int chi = static_cast<int>(classes_.size()) - num_edge_pairs() + num_polygons();
  return (2 - chi) / 2;
}

FieldElement Surface::area() const {
  FieldElement total = FieldElement::zero(spec_);
  for (const Polygon& poly : polygons_) total += polygon_area(poly);
  return total;
}

Surface transform(const Surface& s, const Mat2& g) {
  const FieldElement det = g.a * g.d - g.b * g.c;
  if (det.is_zero()) throw SurfaceError(s.label() + ": transform by singular matrix");
  std::vector<Polygon> mapped;
  mapped.reserve(s.polygons().size());
  for (const Polygon& poly : s.polygons()) mapped.push_back(transform(poly, g));
  return Surface(s.label(), s.spec(), std::move(mapped), s.gluings());
}

}  // namespace prismflats
