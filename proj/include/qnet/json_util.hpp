#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace qnet {

/// Configuration / validation failure that names the offending field.
struct ConfigError : std::runtime_error {
  std::string field;

  ConfigError(std::string field_name, const std::string& message)
      : std::runtime_error(field_name.empty() ? message
                                              : field_name + ": " + message),
        field(std::move(field_name)) {}
};

/// Strict-mode guard: any key outside `allowed` is rejected.
inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<const char*> allowed,
                                const std::string& context) {
  if (!obj.is_object()) return;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      std::string where = context.empty() ? it.key() : context + "." + it.key();
      throw ConfigError(where, "unknown key");
    }
  }
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& context) {
  std::string where = context.empty() ? key : context + "." + key;
  if (!obj.contains(key)) throw ConfigError(where, "missing required key");
  if (!obj.at(key).is_number()) throw ConfigError(where, "must be a number");
  return obj.at(key).get<double>();
}

inline double number_or(const nlohmann::json& obj, const std::string& key,
                        double fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  std::string where = context.empty() ? key : context + "." + key;
  if (!obj.at(key).is_number()) throw ConfigError(where, "must be a number");
  return obj.at(key).get<double>();
}

}  // namespace qnet
