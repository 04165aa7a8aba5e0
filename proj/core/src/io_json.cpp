#include "prismflats/io_json.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json_detail.hpp"

namespace prismflats {
namespace detail {
namespace {

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("surface json: " + what);
}

FieldSpecPtr spec_for(const Json& m) {
  if (!m.is_number_integer()) bad("\"m\" is not an integer");
  const long v = m.get<long>();
  if (v < 1 || v > 100000) bad("\"m\" out of range");
  return FieldSpec::get(static_cast<int>(v));
}

Rational parse_rational(const Json& j) {
  if (!j.is_string()) bad("coefficient is not a string");
  try {
    // mpq_class(string) accepts "p" and "p/q"; canonicalized by the
    // FieldElement constructor downstream.
    return Rational(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    bad("coefficient '" + j.get<std::string>() + "' is not a rational");
  }
}

}  // namespace

Json coeff_array(const FieldElement& x) {
  Json arr = Json::array();
  for (const Rational& c : x.coeffs()) arr.push_back(c.get_str());
  return arr;
}

FieldElement element_from_coeffs(const FieldSpecPtr& spec, const Json& arr) {
  if (!arr.is_array()) bad("coefficient vector is not an array");
  std::vector<Rational> coeffs;
  coeffs.reserve(arr.size());
  for (const Json& c : arr) coeffs.push_back(parse_rational(c));
  if (static_cast<int>(coeffs.size()) != spec->phi()) {
    bad("coefficient vector has length " + std::to_string(coeffs.size()) + ", expected " +
        std::to_string(spec->phi()));
  }
  return FieldElement(spec, std::move(coeffs));
}

Json field_element_json(const FieldElement& x) {
  Json j;
  j["m"] = x.spec()->m();
  j["coeffs"] = coeff_array(x);
  return j;
}

FieldElement field_element_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("coeffs")) {
    bad("field element needs \"m\" and \"coeffs\"");
  }
  return element_from_coeffs(spec_for(j["m"]), j["coeffs"]);
}

Json value_with_approx(const FieldElement& x) {
  Json j;
  j["coeffs"] = coeff_array(x);
  j["approx"] = approx_double(x);
  return j;
}

Json surface_json(const Surface& s) {
  Json j;
  j["label"] = s.label();
  j["m"] = s.spec()->m();
  Json polys = Json::array();
  for (int p = 0; p < s.num_polygons(); ++p) {
    Json verts = Json::array();
    for (const Point2& v : s.polygon(p).vertices) {
      const auto [fx, fy] = approx_point(v);
      verts.push_back(Json::array({coeff_array(v.x), coeff_array(v.y), fx, fy}));
    }
    polys.push_back(Json{{"vertices", std::move(verts)}});
  }
  j["polygons"] = std::move(polys);
  Json glue = Json::array();
  for (const auto& [a, b] : s.gluings()) {
    glue.push_back(Json::array(
        {Json::array({a.polygon, a.edge}), Json::array({b.polygon, b.edge})}));
  }
  j["gluing"] = std::move(glue);
  return j;
}

Surface surface_from_json(const Json& j) {
  if (!j.is_object()) bad("document is not an object");
  for (const char* key : {"label", "m", "polygons", "gluing"}) {
    if (!j.contains(key)) bad(std::string("missing \"") + key + "\"");
  }
  if (!j["label"].is_string()) bad("\"label\" is not a string");
  const FieldSpecPtr spec = spec_for(j["m"]);

  if (!j["polygons"].is_array()) bad("\"polygons\" is not an array");
  std::vector<Polygon> polygons;
  for (const Json& pj : j["polygons"]) {
    if (!pj.is_object() || !pj.contains("vertices") || !pj["vertices"].is_array()) {
      bad("polygon needs a \"vertices\" array");
    }
    Polygon poly;
    for (const Json& vj : pj["vertices"]) {
      // [xcoeffs, ycoeffs, fx, fy]; the float echo is ignored.
      if (!vj.is_array() || vj.size() < 2) bad("vertex is not [xcoeffs, ycoeffs, fx, fy]");
      poly.vertices.emplace_back(element_from_coeffs(spec, vj[0]),
                                 element_from_coeffs(spec, vj[1]));
    }
    polygons.push_back(std::move(poly));
  }

  if (!j["gluing"].is_array()) bad("\"gluing\" is not an array");
  std::vector<std::pair<EdgeRef, EdgeRef>> gluings;
  for (const Json& gj : j["gluing"]) {
    if (!gj.is_array() || gj.size() != 2) bad("gluing entry is not a pair");
    EdgeRef refs[2];
    for (int i = 0; i < 2; ++i) {
      const Json& rj = gj[i];
      if (!rj.is_array() || rj.size() != 2 || !rj[0].is_number_integer() ||
          !rj[1].is_number_integer()) {
        bad("edge reference is not [polygon, edge]");
      }
      refs[i] = EdgeRef{rj[0].get<int>(), rj[1].get<int>()};
    }
    gluings.emplace_back(refs[0], refs[1]);
  }

  return Surface(j["label"].get<std::string>(), spec, std::move(polygons), std::move(gluings));
}

}  // namespace detail

namespace {

std::string dump(const detail::Json& j) { return j.dump(2) + "\n"; }

detail::Json parse(const std::string& text) {
  try {
    return detail::Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("surface json: ") + e.what());
  }
}

}  // namespace

std::string surface_to_json_string(const Surface& s) { return dump(detail::surface_json(s)); }

Surface surface_from_json_string(const std::string& text) {
  return detail::surface_from_json(parse(text));
}

std::string net_to_json_string(const NetLayout& net) {
  detail::Json j;
  j["label"] = "net(" + std::to_string(net.n) + ")";
  j["m"] = net.spec->m();
  detail::Json polys = detail::Json::array();
  for (const Polygon& poly : net.all_polygons()) {
    detail::Json verts = detail::Json::array();
    for (const Point2& v : poly.vertices) {
      const auto [fx, fy] = approx_point(v);
      verts.push_back(detail::Json::array(
          {detail::coeff_array(v.x), detail::coeff_array(v.y), fx, fy}));
    }
    polys.push_back(detail::Json{{"vertices", std::move(verts)}});
  }
  j["polygons"] = std::move(polys);
  j["gluing"] = detail::Json::array();
  return dump(j);
}

std::string field_element_to_json_string(const FieldElement& x) {
  return dump(detail::field_element_json(x));
}

FieldElement field_element_from_json_string(const std::string& text) {
  return detail::field_element_from_json(parse(text));
}

}  // namespace prismflats
