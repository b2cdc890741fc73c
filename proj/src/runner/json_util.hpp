#pragma once

// Checked access to config JSON; every failure is a ConfigError naming the
// JSON path.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "tubemass/types.hpp"

namespace tubemass::runner::json_util {

using Json = nlohmann::json;

inline const Json& need(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(fmt::format("{} must be an object", path));
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(fmt::format("missing {}.{}", path, key));
  return *it;
}

inline void allow_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& path) {
  if (!j.is_object()) throw ConfigError(fmt::format("{} must be an object", path));
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      throw ConfigError(fmt::format("unknown key {}.{}", path, k));
  }
}

inline double as_number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(fmt::format("{} must be a number", path));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(fmt::format("{} must be finite", path));
  return x;
}

inline double number(const Json& j, const char* key, const std::string& path) {
  return as_number(need(j, key, path), path + "." + key);
}

inline double number_or(const Json& j, const char* key, double fallback, const std::string& path) {
  return j.contains(key) ? number(j, key, path) : fallback;
}

inline double positive(const Json& j, const char* key, const std::string& path) {
  const double x = number(j, key, path);
  if (!(x > 0.0)) throw ConfigError(fmt::format("{}.{} must be positive", path, key));
  return x;
}

inline long long integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(fmt::format("{} must be an integer", path));
  return v.get<long long>();
}

inline const Json& array_of(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(fmt::format("{} must be an array", path));
  return j;
}

inline long long integer_or(const Json& j, const char* key, long long fallback, const std::string& path) {
  return j.contains(key) ? integer(j[key], path + "." + key) : fallback;
}

inline std::string string_or(const Json& j, const char* key, const std::string& fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) throw ConfigError(fmt::format("{}.{} must be a string", path, key));
  return j[key].get<std::string>();
}

inline std::vector<double> numbers(const Json& j, const char* key, const std::string& path) {
  const std::string p = path + "." + key;
  const Json& a = array_of(need(j, key, path), p);
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_number(a[i], fmt::format("{}[{}]", p, i)));
  return out;
}

}  // namespace tubemass::runner::json_util
