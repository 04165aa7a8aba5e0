// JSON serialization for surfaces and field elements.
//
// Field coefficients are written as lowest-terms rational strings, so a
// serialize/parse round trip reproduces the exact element.  Each vertex also
// carries redundant float coordinates for consumers without exact types;
// they are ignored on input and recomputed on output.

#pragma once

#include "prismflats/builders.hpp"
#include "prismflats/surface.hpp"

#include <string>

namespace prismflats {

/// {"label", "m", "polygons": [{"vertices": [[xcoeffs, ycoeffs, fx, fy], ...]}],
///  "gluing": [[[p, e], [q, f]], ...]}, indented with two spaces.
std::string surface_to_json_string(const Surface& s);

/// Inverse of surface_to_json_string.  Malformed documents raise
/// std::invalid_argument; documents describing an inconsistent surface fail
/// Surface validation and raise SurfaceError.
Surface surface_from_json_string(const std::string& text);

/// A net is a drawing, not a surface: same polygon JSON (center, petals,
/// base in order) with an empty gluing list.
std::string net_to_json_string(const NetLayout& net);

/// {"m": int, "coeffs": ["p/q", ...]}.
std::string field_element_to_json_string(const FieldElement& x);
FieldElement field_element_from_json_string(const std::string& text);

}  // namespace prismflats
