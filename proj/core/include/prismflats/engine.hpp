// Saddle connection enumeration, separatrix tracing, and cylinder discovery.
//
// Floats drive the search; every decision within tolerance of a boundary
// (wedge membership, length cutoffs, direction parallelism) falls back to
// exact field arithmetic, so the output is exact while the bulk of the work
// stays in doubles.

#pragma once

#include "prismflats/surface.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace prismflats {

enum class Direction { kHorizontal, kVertical };

/// Straight geodesic between cone points with none in its interior.  It may
/// pass straight through regular (angle 2 pi) vertices.  Reported in the
/// canonical orientation: dy > 0, or dy = 0 and dx > 0, decided exactly.
struct SaddleConnection {
  int start_cp = -1;  // index into cone_point_classes(s)
  int end_cp = -1;
  double dx = 0;
  double dy = 0;
  double length = 0;
  Point2 exact_holonomy;
  FieldElement exact_length_sq;
  Corner start_corner{-1, -1};  // corner whose sector contains the direction
};

struct EnumerationPolicy {
  double length_bound = 0;
  double tolerance = 1e-9;
  double exact_confirm_band = 1e-6;
  long max_developed_polygons = 10000000;
};

/// The polygon budget ran out before the wedge search covered every sector
/// out to the length bound; results would be silently incomplete.
struct EnumerationIncompleteError : std::runtime_error {
  explicit EnumerationIncompleteError(const std::string& what) : std::runtime_error(what) {}
};

/// Vertex class indices of the singular classes, in class order.  Cone point
/// ids used by the engine are positions in this list.
std::vector<int> cone_point_classes(const Surface& s);

/// Complete, duplicate-free list of the unoriented saddle connections of
/// length <= policy.length_bound, sorted by (length, angle, start_cp) with
/// exact tie-breaking.  Lengths within exact_confirm_band of the bound are
/// settled by exact length-squared comparison.
std::vector<SaddleConnection> enumerate_saddle_connections(const Surface& s,
                                                           const EnumerationPolicy& policy);

struct TraceResult {
  bool hit = false;  // false: survived past max_length
  double distance = 0;
  FieldElement exact_distance_sq;  // valid iff hit
  int end_cp = -1;
};

/// Follow the straight ray from the cone point at `corner` in `direction`
/// (which must lie in that corner's sector) until it hits a cone point or
/// exceeds max_length.  Regular vertices are passed straight through, and
/// travel exactly along edges is supported.
TraceResult trace_separatrix(const Surface& s, const Corner& corner, const Point2& direction,
                             double max_length);

/// Exact count of unoriented saddle connections of exact length 1 whose
/// direction is exactly horizontal resp. vertical.
int count_unit_saddle_connections(const Surface& s, Direction dir);

/// Both readings of a per-direction unit count: the two axis counts and
/// their total.
struct UnitCounts {
  int horizontal = 0;
  int vertical = 0;
  int total = 0;
};
UnitCounts unit_saddle_connection_counts(const Surface& s);

struct WaistWitness {
  int polygon = -1;   // original polygon containing the start point
  Point2 start;       // exact start point in that polygon
  Point2 holonomy;    // exact displacement after one loop around the cylinder
  bool closes = false;  // developing the loop returns to the start exactly
};

/// Maximal flat cylinder in an axis direction.  All exact fields are real
/// elements of the surface's field and modulus * circumference == height.
struct Cylinder {
  Direction direction = Direction::kHorizontal;
  FieldElement circumference;
  FieldElement height;
  FieldElement modulus;
  std::vector<SaddleConnection> boundary_low;
  std::vector<SaddleConnection> boundary_high;
  WaistWitness waist;
  /// Exact footprint: the cylinder's intersection with each polygon, as
  /// chart-coordinate pieces in (polygon, height) order.  Piece areas sum to
  /// circumference * height.
  std::vector<std::pair<int, Polygon>> footprint;
};

/// All maximal cylinders in the direction whose boundary saddle connections
/// all have length <= boundary_bound: direction-parallel saddle connections
/// up to the bound are traced exactly, the surface is cut along them, and
/// the flat annular components are certified and measured exactly.
std::vector<Cylinder> cylinders_in_direction(const Surface& s, Direction dir,
                                             double boundary_bound);

/// CSV with header length,dx,dy,start_cp,end_cp; one row per connection in
/// enumeration order.  Byte-stable for a fixed input.
std::string saddle_connections_to_csv(const std::vector<SaddleConnection>& list);

}  // namespace prismflats
