#pragma once

#include "adversim/error.hpp"
#include "adversim/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <type_traits>

namespace adversim::json_util {

using nlohmann::json;

inline json parse(const std::string& bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("/: malformed JSON (") + e.what() + ")");
  }
}

inline json to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

inline json to_json(const Polyline& line) {
  json out = json::array();
  for (const auto& p : line) out.push_back(to_json(p));
  return out;
}

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::kSchemaViolation, (path.empty() ? std::string("/") : path) + ": " + msg);
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

inline Vec2 vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
  return {number(j[0], path + "/0"), number(j[1], path + "/1")};
}

inline Polyline polyline(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of points");
  Polyline out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(vec2(j[k], path + "/" + std::to_string(k)));
  return out;
}

/// Field access on a JSON object with path-qualified schema errors.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) const {
    if (!j_.contains(key)) fail(path_ + "/" + key, "missing field");
    return j_.at(key);
  }

  template <typename T>
  T get(const std::string& key) const {
    const json& v = at(key);
    const std::string p = path_ + "/" + key;
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(p, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(p, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(p, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) return v.get<T>();
        if (v.get<std::int64_t>() < 0) fail(p, "expected a non-negative integer");
      }
      return v.get<T>();
    } else {
      return static_cast<T>(number(v, p));
    }
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) const {
    return has(key) ? get<T>(key) : fallback;
  }

  const json& array(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) fail(path_ + "/" + key, "expected an array");
    return v;
  }

  Vec2 vec2(const std::string& key) const { return json_util::vec2(at(key), path_ + "/" + key); }
  Polyline polyline(const std::string& key) const {
    return json_util::polyline(at(key), path_ + "/" + key);
  }
  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

}  // namespace adversim::json_util
