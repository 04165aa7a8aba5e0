// Exact straight-line tracer shared by the enumeration engine and the
// cylinder cutter.  Not installed.

#pragma once

#include "prismflats/engine.hpp"

#include <vector>

namespace prismflats {
namespace detail {

/// One maximal piece of a traced ray inside a single polygon, in that
/// polygon's canonical coordinates.  along_edge >= 0 marks travel on that
/// edge of the polygon instead of an interior chord.
struct RaySegment {
  int polygon = -1;
  Point2 enter;
  Point2 exit;
  int along_edge = -1;
};

struct RayOutcome {
  bool hit = false;        // first singular vertex reached within max_length
  Point2 hit_point;        // exact planar position of the hit, from the cone point
  int hit_class = -1;      // surface vertex class index
};

/// Follow the ray  s -> s * dir  (s > 0) from the cone point at `start`,
/// whose sector must contain dir.  Travel along edges and straight passage
/// through regular vertices are exact; the trace stops at the first singular
/// vertex within max_length, or reports survival.  Every polygon piece is
/// appended to *segments when given (pieces of a surviving trace are
/// truncated at the last event inside the bound).
RayOutcome trace_ray(const Surface& s, const Corner& start, const Point2& dir, double max_length,
                     std::vector<RaySegment>* segments);

/// Membership of dir in the half-open sector [outgoing edge, reversed
/// incoming edge) at the corner, decided exactly.
bool corner_arc_contains(const Surface& s, const Corner& c, const Point2& dir);

/// Map from vertex class index to cone point id (-1 for regular classes).
std::vector<int> cone_point_ids(const Surface& s);

}  // namespace detail
}  // namespace prismflats
