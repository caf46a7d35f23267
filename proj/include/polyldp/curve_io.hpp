#pragma once

// Curve spec files (JSON):
//
//   {"id": "d1", "family": "diamond", "parameters": {"area": 1.0}}
//   {"id": "p", "family": "polyline", "vertices": [[0, 0], [1, 0], [0, 1]],
//    "target_area": 1.0}
//
// Families and their parameters:
//   square {side}, diamond {area}, ellipse {a, b},
//   vershik-composite {area and/or perimeter}, vershik-quadrant {area},
//   polyline (no parameters; "vertices" required).
// "target_area" recentres the region at its barycenter and rescales it.
// Unknown keys anywhere are rejected.

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyldp/curves.hpp"
#include "polyldp/error.hpp"
#include "polyldp/limit_shape.hpp"

namespace polyldp {

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(ErrorKind::kInvalidInput, "curve spec: unknown key '" + key + "' in " + where);
  }
}

inline double number_field(const nlohmann::json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) fail(ErrorKind::kInvalidInput, "curve spec: missing '" + key + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(ErrorKind::kInvalidInput, "curve spec: '" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

}  // namespace detail

inline UnimodalCurve parse_curve_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::kInvalidInput, std::string("curve spec: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::kInvalidInput, "curve spec: top level must be an object");
  detail::reject_unknown(doc, {"id", "family", "parameters", "vertices", "target_area"}, "curve spec");
  if (!doc.contains("family") || !doc["family"].is_string()) {
    fail(ErrorKind::kInvalidInput, "curve spec: 'family' (string) is required");
  }
  const std::string family = doc["family"].get<std::string>();
  const std::string id = doc.contains("id") ? doc["id"].get<std::string>() : family;
  const nlohmann::json params = doc.contains("parameters") ? doc["parameters"] : nlohmann::json::object();
  if (!params.is_object()) fail(ErrorKind::kInvalidInput, "curve spec: 'parameters' must be an object");
  if (family != "polyline" && doc.contains("vertices")) {
    fail(ErrorKind::kInvalidInput, "curve spec: 'vertices' is only valid for family polyline");
  }
  const std::string where = "parameters of " + family;

  auto build = [&]() -> UnimodalCurve {
    if (family == "square") {
      detail::reject_unknown(params, {"side"}, where);
      return square_curve(detail::number_field(params, "side", where), id);
    }
    if (family == "diamond") {
      detail::reject_unknown(params, {"area"}, where);
      return diamond_curve(detail::number_field(params, "area", where), id);
    }
    if (family == "ellipse") {
      detail::reject_unknown(params, {"a", "b"}, where);
      return ellipse_curve(detail::number_field(params, "a", where), detail::number_field(params, "b", where), id);
    }
    if (family == "vershik-quadrant") {
      detail::reject_unknown(params, {"area"}, where);
      return vershik_quadrant_region(detail::number_field(params, "area", where), id);
    }
    if (family == "vershik-composite") {
      detail::reject_unknown(params, {"area", "perimeter"}, where);
      ShapeConstraint c;
      if (params.contains("area")) c.area = detail::number_field(params, "area", where);
      if (params.contains("perimeter")) c.perimeter = detail::number_field(params, "perimeter", where);
      if (!c.area && !c.perimeter) fail(ErrorKind::kInvalidInput, "curve spec: vershik-composite needs area or perimeter");
      return build_limit_shape(c).curve.renamed(id);
    }
    if (family == "polyline") {
      detail::reject_unknown(params, {}, where);
      if (!doc.contains("vertices") || !doc["vertices"].is_array()) {
        fail(ErrorKind::kInvalidInput, "curve spec: polyline needs a 'vertices' array");
      }
      std::vector<Point2> vertices;
      for (const auto& v : doc["vertices"]) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
          fail(ErrorKind::kInvalidInput, "curve spec: each vertex must be [x, y]");
        }
        vertices.push_back({v[0].get<double>(), v[1].get<double>()});
      }
      return UnimodalCurve::polyline(std::move(vertices), id);
    }
    fail(ErrorKind::kInvalidInput, "curve spec: unknown family '" + family + "'");
  };

  UnimodalCurve curve = build();
  if (doc.contains("target_area")) {
    if (!doc["target_area"].is_number()) fail(ErrorKind::kInvalidInput, "curve spec: 'target_area' must be a number");
    curve = normalize(curve, doc["target_area"].get<double>());
  }
  return curve;
}

inline UnimodalCurve load_curve_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot read curve spec " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_curve_spec(text.str());
}

}  // namespace polyldp
