// Planar primitives over a cyclotomic field: points, 2x2 matrices, polygons.
// Everything here is exact; approximate projections are provided only for
// plotting and for the floating-point fast path of the geodesic engine.

#pragma once

#include "prismflats/cyclotomic.hpp"

#include <utility>
#include <vector>

namespace prismflats {

struct Point2 {
  FieldElement x;
  FieldElement y;

  Point2() = default;
  Point2(FieldElement px, FieldElement py) : x(std::move(px)), y(std::move(py)) {}

  static Point2 zero(const FieldSpecPtr& spec) {
    return Point2(FieldElement::zero(spec), FieldElement::zero(spec));
  }

  Point2& operator+=(const Point2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Point2& operator-=(const Point2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend Point2 operator+(Point2 a, const Point2& b) { return a += b; }
  friend Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
  friend Point2 operator-(const Point2& a) { return Point2(-a.x, -a.y); }
  friend Point2 operator*(const Rational& q, Point2 a) {
    a.x *= q;
    a.y *= q;
    return a;
  }
  friend Point2 operator*(const FieldElement& s, Point2 a) {
    a.x = s * a.x;
    a.y = s * a.y;
    return a;
  }
  bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Point2& o) const { return !(*this == o); }
};

inline FieldElement cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline FieldElement dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }

inline std::pair<double, double> approx_point(const Point2& p) {
  return {approx_double(p.x), approx_double(p.y)};
}

/// Column-action matrix [[a, b], [c, d]] over the field.
struct Mat2 {
  FieldElement a, b, c, d;

  Point2 apply(const Point2& p) const { return Point2(a * p.x + b * p.y, c * p.x + d * p.y); }
  Mat2 compose(const Mat2& o) const {
    return Mat2{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

/// Exact rotation by 2*pi*k/n.
Mat2 rotation(const FieldSpecPtr& spec, long k, long n);

/// Exact rotation by +90 degrees.
Mat2 rotation_quarter(const FieldSpecPtr& spec);

/// Closed polygon given by its vertices in counterclockwise order.  Edges are
/// indexed by their start vertex: edge i runs vertex i -> vertex i+1 (mod k).
struct Polygon {
  std::vector<Point2> vertices;

  int size() const { return static_cast<int>(vertices.size()); }
  const Point2& vertex(int i) const { return vertices[index(i)]; }
  Point2 edge_vector(int i) const { return vertex(i + 1) - vertex(i); }
  int index(int i) const {
    const int k = size();
    return ((i % k) + k) % k;
  }
};

/// Shoelace area; positive for counterclockwise boundaries.
FieldElement polygon_area(const Polygon& poly);

/// Arithmetic mean of the vertices.
Point2 polygon_centroid(const Polygon& poly);

Polygon translate(const Polygon& poly, const Point2& t);
Polygon transform(const Polygon& poly, const Mat2& map);

}  // namespace prismflats
