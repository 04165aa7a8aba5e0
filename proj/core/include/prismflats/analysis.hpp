// Verification and counting layered on the builders and the saddle
// connection engine: covering checks, the hyperelliptic involution,
// lattice obstructions, and quadratic growth reports.

#pragma once

#include "prismflats/builders.hpp"
#include "prismflats/engine.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace prismflats {

/// Re-verification of a covering candidate, check by check.  Every check is
/// exact; failures carry a witness description.
struct CoveringReport {
  int degree = 0;
  bool translations_ok = false;  // each source polygon is an exact translate
  bool gluings_ok = false;       // glued edges map to glued edges, compatibly
  bool fibers_ok = false;        // every fiber has exactly `degree` polygons
  bool balanced = false;         // cone points map onto cone points
  std::vector<std::string> failures;

  bool ok() const { return translations_ok && gluings_ok && fibers_ok && balanced; }
};

CoveringReport verify_covering(const CoveringMap& m);

/// Outcome of testing the point reflection z -> 2*center - z as a surface
/// automorphism.  The reflection must fix the surface point at the center's
/// coordinate; a reflection about some other center that happens to be an
/// automorphism still reports false.
struct InvolutionReport {
  bool is_involution = false;
  int fixed_point_count = 0;
  /// Each fixed surface point once, as (polygon, exact position): polygon
  /// interior points, midpoints of inverted edges, fixed vertex classes.
  std::vector<std::pair<int, Point2>> fixed_points;
  std::string witness;  // first failed check; empty when is_involution
};

InvolutionReport verify_involution(const Surface& s, const Point2& center);

/// Closed-form reciprocal modulus c/h of the distinguished horizontal
/// cylinder: 1 + cot(pi/n) for n divisible by 4; 2(1 + cot(pi/n) +
/// cot^2(pi/n)) for n = 4k+2; 2(cot(pi/2n) + 1/(2 sin^2(pi/2n))) for odd n.
/// n = 4 has no such cylinder and is rejected.
FieldElement expected_reciprocal_modulus(int n);

/// Certificate that a surface is square-tiled: one scaling makes every edge
/// holonomy integral.
struct SquareTiledWitness {
  Rational scaling;
  std::vector<std::pair<long, long>> holonomies;  // scaled edge vectors
};

/// Lattice-property dichotomy data for the n-prism family: either two
/// horizontal cylinders with an irrational moduli ratio (every n except 4),
/// or the square-tiled witness (n = 4).
struct LatticeObstruction {
  int n = 0;
  std::string label;
  std::optional<Cylinder> cylinder_a;  // unit stem cylinder, modulus 1
  std::optional<Cylinder> cylinder_b;  // the constructed cylinder
  /// modulus_a / modulus_b when both cylinders exist.  Cylinder a is the
  /// unit square, so this equals circumference_b / height_b.
  FieldElement moduli_ratio;
  bool ratio_is_irrational = false;
  std::optional<SquareTiledWitness> square_tiled_witness;
};

/// For n = 4 returns the square-tiled witness of the unfolding.  Otherwise
/// decomposes Pi_n (odd n) or Pi_n^h (even n) horizontally with boundary
/// bound twice the drawing diameter and pairs the unit stem cylinder with
/// the cylinder of reciprocal modulus expected_reciprocal_modulus(n);
/// missing either cylinder is a hard SurfaceError.
LatticeObstruction lattice_obstruction(int n);

/// Number of saddle connections of length <= bound, decided exactly.
/// budget > 0 overrides the enumeration polygon budget.
long connection_count(const Surface& s, double length_bound, long budget = 0);

/// connection_count at several bounds from one enumeration pass.
std::vector<long> connection_counts(const Surface& s, const std::vector<double>& bounds,
                                    long budget = 0);

/// Quadratic-growth report on a linear grid of geometric lengths l_i.
/// N(l) counts each unoriented saddle connection once, decided exactly at
/// every grid value.  The averaged column follows the time average
/// A(L) = (1/L) * integral_0^L N(e^t) e^(-2t) dt at L = ln l_i, evaluated in
/// closed form over the enumerated lengths; sv_estimate is area * A / pi^2.
/// Both averages are empirical trends, not exact invariants.
struct CountReport {
  std::string label;
  double area = 0;
  std::vector<double> lengths;          // grid values l_i, increasing
  std::vector<long> counts;             // N(l_i), nondecreasing
  std::vector<double> quadratic_ratio;  // N(l_i) / l_i^2
  std::vector<double> emm_average;      // A(ln l_i); zero when l_i <= 1
  std::vector<double> sv_estimate;      // area * A / pi^2
};

CountReport counting_report(const Surface& s, double l_max, int grid_size,
                            long budget = 0);

/// Saddle connection count of the prism n-differential itself:
/// N(unfolding(n), L) / n, with the divisibility enforced (the covering
/// identity makes the division exact; a remainder is a hard SurfaceError).
long prism_count(int n, double length_bound, long budget = 0);

/// CSV with header L,N,N/L^2,A(L),c_hat(L); one row per grid value.
/// Byte-stable for a fixed report.
std::string count_report_to_csv(const CountReport& rep);

/// JSON document carrying the label, area, and the report columns.
std::string count_report_to_json_string(const CountReport& rep);

/// JSON with exact coefficient serializations (plus float echoes) of the
/// cylinder measurements and moduli ratio, or the square-tiled witness.
std::string lattice_obstruction_to_json_string(const LatticeObstruction& ob);

/// JSON array of cylinders: direction plus exact circumference, height,
/// and modulus, each with a float echo.
std::string cylinders_to_json_string(const std::vector<Cylinder>& cylinders);

/// JSON document for an involution report: verdict, fixed point count,
/// the chart coordinates of each fixed point, and any witness.
std::string involution_report_to_json_string(const InvolutionReport& rep);

/// JSON document pairing a covering map with its verification outcome.
std::string covering_report_to_json_string(const CoveringMap& map,
                                           const CoveringReport& rep);

}  // namespace prismflats
