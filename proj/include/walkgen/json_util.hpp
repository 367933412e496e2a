#pragma once

// Strict JSON readers shared by the file formats: unknown keys are rejected,
// missing keys are named in the error.

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "walkgen/errors.hpp"
#include "walkgen/geometry.hpp"

namespace walkgen::jsonu {

using nlohmann::json;

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  if (!j.is_object())
    throw ValidationError("expected-object", where + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known)
      throw ValidationError("unknown-field",
                            "unknown field '" + item.key() + "' in " + where);
  }
}

inline const json& require(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end())
    throw ValidationError("missing-field",
                          where + " is missing required field '" + key + "'");
  return *it;
}

inline double as_number(const json& j, const std::string& where) {
  if (!j.is_number())
    throw ValidationError("expected-number", where + " must be a number");
  return j.get<double>();
}

inline Vec2 as_vec2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw ValidationError("expected-pair", where + " must be [x, z]");
  return {as_number(j[0], where), as_number(j[1], where)};
}

inline Vec3 as_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw ValidationError("expected-triple", where + " must be [x, y, z]");
  return {as_number(j[0], where), as_number(j[1], where), as_number(j[2], where)};
}

inline json vec2_json(const Vec2& v) { return json::array({v.x, v.z}); }
inline json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace walkgen::jsonu
