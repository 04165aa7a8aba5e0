// Translation surface presented as convex polygons with edges glued in pairs
// by translation.  Construction validates the presentation and computes the
// combinatorial invariants (vertex classes, cone angles, stratum, genus).

#pragma once

#include "prismflats/geometry.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace prismflats {

struct SurfaceError : std::runtime_error {
  explicit SurfaceError(const std::string& what) : std::runtime_error(what) {}
};

struct EdgeRef {
  int polygon = -1;
  int edge = -1;
  auto operator<=>(const EdgeRef&) const = default;
};

/// Corner of a polygon, named by the vertex it sits at (between incoming edge
/// vertex-1 and outgoing edge vertex).
struct Corner {
  int polygon = -1;
  int vertex = -1;
  auto operator<=>(const Corner&) const = default;
};

/// All corners identified at one point of the surface, with the total angle
/// around it as an exact multiple of 2*pi.
struct VertexClass {
  std::vector<Corner> corners;
  int turns = 0;  // cone angle = 2*pi*turns

  bool singular() const { return turns != 1; }
};

/// Checks every presentation invariant without throwing: at least one
/// polygon, coordinates on the given field spec, convexity with positive
/// area (straight corners allowed), every edge glued exactly once and never
/// to itself, glued pairs carrying exactly opposite edge vectors.  Returns
/// one message per violation; empty means valid.
std::vector<std::string> validate_presentation(
    const std::string& label, const FieldSpecPtr& spec, const std::vector<Polygon>& polygons,
    const std::vector<std::pair<EdgeRef, EdgeRef>>& gluings);

class Surface {
 public:
  /// Runs validate_presentation and throws SurfaceError listing every
  /// violation if there are any.
  Surface(std::string label, FieldSpecPtr spec, std::vector<Polygon> polygons,
          std::vector<std::pair<EdgeRef, EdgeRef>> gluings);

  const std::string& label() const { return label_; }
  const FieldSpecPtr& spec() const { return spec_; }
  const std::vector<Polygon>& polygons() const { return polygons_; }
  const Polygon& polygon(int p) const { return polygons_[p]; }
  const std::vector<std::pair<EdgeRef, EdgeRef>>& gluings() const { return gluings_; }

  int num_polygons() const { return static_cast<int>(polygons_.size()); }
  int num_edge_pairs() const { return static_cast<int>(gluings_.size()); }

  EdgeRef partner(EdgeRef e) const;

  /// Offset added to the partner polygon's canonical coordinates so that its
  /// copy of the glued edge coincides with edge e: crossing edge e = (p, i)
  /// into (q, j) develops q at  canonical(q) + crossing_translation(e).
  Point2 crossing_translation(EdgeRef e) const;

  const std::vector<VertexClass>& vertex_classes() const { return classes_; }
  int vertex_class_of(Corner c) const;

  /// Float embeddings of all polygon vertices, accurate to 1e-12; computed
  /// once at construction for the renderer and the engine's fast path.
  const std::vector<std::vector<std::pair<double, double>>>& float_vertices() const {
    return float_vertices_;
  }

  /// Orders of the cone points (turns - 1 for each class with turns > 1),
  /// descending.  Empty for a torus.
  std::vector<int> stratum() const;
  int genus() const;
  FieldElement area() const;

 private:
  void build_vertex_classes();

  std::string label_;
  FieldSpecPtr spec_;
  std::vector<Polygon> polygons_;
  std::vector<std::pair<EdgeRef, EdgeRef>> gluings_;
  std::vector<std::vector<EdgeRef>> partner_;        // [polygon][edge]
  std::vector<VertexClass> classes_;
  std::vector<std::vector<int>> class_of_corner_;    // [polygon][vertex]
  std::vector<std::vector<std::pair<double, double>>> float_vertices_;
};

/// Nonsingular linear image of the surface: every vertex mapped by g, the
/// gluing combinatorics unchanged.  Orientation-reversing maps (det < 0) are
/// rejected by validation since they flip the boundary orientation.
Surface transform(const Surface& s, const Mat2& g);

/// Next corner when walking around the vertex class of c: cross the incoming
/// edge (c.polygon, c.vertex - 1) and land on the corner at the start vertex
/// of its partner edge.
Corner next_corner_around_vertex(const Surface& s, Corner c);

}  // namespace prismflats
