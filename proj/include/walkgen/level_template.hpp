#pragma once

// The level-design problem instance: a flat walkable surface, start/end
// points, and objective markers the walking agent must see or never see.

#include <string>
#include <vector>

#include "walkgen/errors.hpp"
#include "walkgen/geometry.hpp"
#include "walkgen/json_util.hpp"

namespace walkgen {

enum class MarkerConstraint { MustSee, MustStayHidden };

struct ObjectiveMarker {
  std::string id;
  Aabb box;
  MarkerConstraint constraint = MarkerConstraint::MustSee;

  bool operator==(const ObjectiveMarker& o) const = default;
};

struct LevelTemplate {
  double surface_x = 20.0;  // ground rectangle [0, surface_x] x [0, surface_z]
  double surface_z = 20.0;
  Vec2 start{1.0, 1.0};
  Vec2 end{19.0, 19.0};
  double eye_height = 1.6;
  std::vector<ObjectiveMarker> markers;

  Rect2 surface() const { return {{0.0, 0.0}, {surface_x, surface_z}}; }
  bool operator==(const LevelTemplate& o) const = default;
};

// Every violation is reported, in a fixed order; empty result means valid.
inline std::vector<Violation> validate(const LevelTemplate& t) {
  std::vector<Violation> out;
  if (t.surface_x <= 0.0 || t.surface_z <= 0.0)
    out.push_back({"bad-surface", "surface extents must be positive"});
  if (t.eye_height <= 0.0)
    out.push_back({"bad-eye-height", "eye_height must be positive"});
  if (!t.surface().contains(t.start))
    out.push_back({"start-outside-surface", "start point is outside the surface"});
  if (!t.surface().contains(t.end))
    out.push_back({"end-outside-surface", "end point is outside the surface"});
  if (t.start == t.end)
    out.push_back({"start-equals-end", "start and end points must differ"});
  for (std::size_t i = 0; i < t.markers.size(); ++i) {
    const ObjectiveMarker& m = t.markers[i];
    const std::string tag = "marker '" + m.id + "'";
    if (!m.box.valid() || (m.box.max.x - m.box.min.x) <= 0.0 ||
        (m.box.max.y - m.box.min.y) <= 0.0 || (m.box.max.z - m.box.min.z) <= 0.0)
      out.push_back({"empty-marker-box", tag + " must have positive volume"});
    else if (m.box.min.x < 0.0 || m.box.max.x > t.surface_x ||
             m.box.min.z < 0.0 || m.box.max.z > t.surface_z)
      out.push_back({"marker-outside-surface",
                     tag + " lies outside the surface horizontally"});
    for (std::size_t j = 0; j < i; ++j) {
      if (t.markers[j].id == m.id) {
        out.push_back({"duplicate-marker-id", "marker id '" + m.id + "' repeats"});
        break;
      }
    }
  }
  return out;
}

inline void validate_or_throw(const LevelTemplate& t) {
  auto violations = validate(t);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

inline const char* constraint_name(MarkerConstraint c) {
  return c == MarkerConstraint::MustSee ? "must_see" : "must_stay_hidden";
}

inline LevelTemplate load_template(const std::string& text) {
  using jsonu::json;
  const json j = jsonu::parse_text(text);
  jsonu::check_keys(j, {"surface", "start", "end", "eye_height", "markers"},
                    "template");
  LevelTemplate t;
  const json& surface = jsonu::require(j, "surface", "template");
  jsonu::check_keys(surface, {"x", "z"}, "surface");
  t.surface_x = jsonu::as_number(jsonu::require(surface, "x", "surface"), "surface.x");
  t.surface_z = jsonu::as_number(jsonu::require(surface, "z", "surface"), "surface.z");
  t.start = jsonu::as_vec2(jsonu::require(j, "start", "template"), "start");
  t.end = jsonu::as_vec2(jsonu::require(j, "end", "template"), "end");
  if (j.contains("eye_height"))
    t.eye_height = jsonu::as_number(j["eye_height"], "eye_height");
  t.markers.clear();
  const json& markers = jsonu::require(j, "markers", "template");
  if (!markers.is_array())
    throw ValidationError("expected-array", "markers must be an array");
  for (const json& mj : markers) {
    jsonu::check_keys(mj, {"id", "min", "max", "constraint"}, "marker");
    ObjectiveMarker m;
    const json& id = jsonu::require(mj, "id", "marker");
    if (!id.is_string())
      throw ValidationError("expected-string", "marker id must be a string");
    m.id = id.get<std::string>();
    m.box.min = jsonu::as_vec3(jsonu::require(mj, "min", "marker"), "marker min");
    m.box.max = jsonu::as_vec3(jsonu::require(mj, "max", "marker"), "marker max");
    const json& c = jsonu::require(mj, "constraint", "marker");
    const std::string cs = c.is_string() ? c.get<std::string>() : "";
    if (cs == "must_see")
      m.constraint = MarkerConstraint::MustSee;
    else if (cs == "must_stay_hidden")
      m.constraint = MarkerConstraint::MustStayHidden;
    else
      throw ValidationError("bad-constraint",
                            "marker constraint must be must_see or must_stay_hidden");
    t.markers.push_back(std::move(m));
  }
  return t;
}

inline std::string save_template(const LevelTemplate& t) {
  using jsonu::json;
  json j;
  j["surface"] = {{"x", t.surface_x}, {"z", t.surface_z}};
  j["start"] = jsonu::vec2_json(t.start);
  j["end"] = jsonu::vec2_json(t.end);
  j["eye_height"] = t.eye_height;
  json markers = json::array();
  for (const ObjectiveMarker& m : t.markers) {
    markers.push_back({{"id", m.id},
                       {"min", jsonu::vec3_json(m.box.min)},
                       {"max", jsonu::vec3_json(m.box.max)},
                       {"constraint", constraint_name(m.constraint)}});
  }
  j["markers"] = std::move(markers);
  return j.dump(2) + "\n";
}

}  // namespace walkgen
