#include <string>

#include "darboux/catalog.hpp"

namespace darboux {

namespace {

using nlohmann::json;

double num(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw SpecError(std::string("surface spec: missing numeric parameter '") + key + "'");
  return obj[key].get<double>();
}

double num_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw SpecError(std::string("surface spec: '") + key + "' must be a number");
  return obj[key].get<double>();
}

std::pair<double, double> range_or(const json& ranges, const char* key, std::pair<double, double> fallback) {
  if (!ranges.contains(key)) return fallback;
  const json& r = ranges[key];
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
    throw SpecError(std::string("surface spec: range '") + key + "' must be [min, max]");
  return {r[0].get<double>(), r[1].get<double>()};
}

SurfacePtr quadric_from_json(QuadricKind kind, const json& params, const json& ranges, const json& branch) {
  QuadricSpec s;
  s.kind = kind;
  s.a = num(params, "a");
  s.b = num(params, "b");
  s.c = num(params, "c");
  s.v_extent = num_or(ranges, "v_extent", 0.0);
  if (branch.contains("chart")) {
    const std::string chart = branch["chart"].get<std::string>();
    if (chart == "octant") s.chart = QuadricChart::Octant;
    else if (chart == "global") s.chart = QuadricChart::Global;
    else throw SpecError("surface spec: chart must be 'octant' or 'global'");
  }
  if (branch.contains("signs")) {
    const json& sg = branch["signs"];
    if (!sg.is_array() || sg.size() != 3) throw SpecError("surface spec: branch signs must have three entries");
    for (int i = 0; i < 3; ++i) s.signs[i] = sg[i].get<int>();
  }
  return make_quadric(s);
}

ProfilePtr profile_from_json(const json& params) {
  const std::string kind = params.value("profile", std::string("sinusoid"));
  if (kind == "constant") return constant_profile(num(params, "r0"));
  if (kind == "sinusoid")
    return sinusoid_profile(num(params, "r0"), num(params, "amplitude"), num_or(params, "omega", 1.0),
                            num_or(params, "phase", 0.0));
  if (kind == "torus") return torus_profile(num(params, "R"), num(params, "rho"));
  throw SpecError("surface spec: unknown profile '" + kind + "'");
}

}  // namespace

std::vector<std::string> catalog_types() {
  return {"ellipsoid", "hyperboloid1", "hyperboloid2", "revolution", "torus", "cone", "cylinder"};
}

SurfacePtr surface_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw SpecError("surface spec: object with a string 'type' expected");
  const std::string type = j["type"].get<std::string>();
  const json params = j.value("parameters", json::object());
  const json ranges = j.value("ranges", json::object());
  const json branch = j.value("branch", json::object());
  SurfacePtr out;
  try {
    if (type == "ellipsoid") {
      out = quadric_from_json(QuadricKind::Ellipsoid, params, ranges, branch);
    } else if (type == "hyperboloid1") {
      out = quadric_from_json(QuadricKind::OneSheet, params, ranges, branch);
    } else if (type == "hyperboloid2") {
      out = quadric_from_json(QuadricKind::TwoSheet, params, ranges, branch);
    } else if (type == "revolution" || type == "torus") {
      json p = params;
      if (type == "torus") p["profile"] = "torus";
      RevolutionSpec s;
      s.profile = profile_from_json(p);
      std::tie(s.u_min, s.u_max) = range_or(ranges, "u", {s.u_min, s.u_max});
      out = make_revolution(s);
    } else if (type == "cone") {
      ConeSpec s;
      const std::string d = params.value("directrix", std::string("circle"));
      if (d == "circle") s.directrix = spherical_circle(num(params, "beta"));
      else if (d == "ellipse") s.directrix = arc_length(spherical_ellipse(num(params, "A"), num(params, "B")));
      else throw SpecError("surface spec: cone directrix must be 'circle' or 'ellipse'");
      std::tie(s.u_min, s.u_max) = range_or(ranges, "u", {0.0, 0.0});
      std::tie(s.v_min, s.v_max) = range_or(ranges, "v", {s.v_min, s.v_max});
      out = make_cone(s);
    } else if (type == "cylinder") {
      CylinderSpec s;
      const std::string d = params.value("directrix", std::string("circle"));
      if (d == "circle") s.directrix = planar_circle(num(params, "r"));
      else if (d == "ellipse") s.directrix = arc_length(planar_ellipse(num(params, "A"), num(params, "B")));
      else throw SpecError("surface spec: cylinder directrix must be 'circle' or 'ellipse'");
      std::tie(s.u_min, s.u_max) = range_or(ranges, "u", {0.0, 0.0});
      std::tie(s.v_min, s.v_max) = range_or(ranges, "v", {s.v_min, s.v_max});
      out = make_cylinder(s);
    } else {
      throw SpecError("surface spec: unknown type '" + type + "'");
    }
  } catch (const json::exception& e) {
    throw SpecError(std::string("surface spec: ") + e.what());
  }
  if (j.contains("scale")) out = scaled(out, num(j, "scale"));
  return out;
}

}  // namespace darboux
