// Shared nlohmann helpers for the modules that emit JSON documents.  Not
// installed; public headers stay free of the vendored library.

#pragma once

#include "prismflats/cyclotomic.hpp"
#include "prismflats/surface.hpp"

#include <json.hpp>

namespace prismflats::detail {

using Json = nlohmann::ordered_json;

Json coeff_array(const FieldElement& x);
FieldElement element_from_coeffs(const FieldSpecPtr& spec, const Json& arr);

/// {"m", "coeffs"} standalone form.
Json field_element_json(const FieldElement& x);
FieldElement field_element_from_json(const Json& j);

Json surface_json(const Surface& s);
Surface surface_from_json(const Json& j);

/// Exact value plus a float echo: {"coeffs", "approx"}.
Json value_with_approx(const FieldElement& x);

}  // namespace prismflats::detail
