#pragma once

// Small structural validator covering the subset of JSON Schema the shipped
// schemas use: "type" (string or union array), "required", "properties",
// "additionalProperties": false.

#include <string>

#include <json.hpp>

namespace oracle {

inline bool matches_type(const nlohmann::json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "number") return value.is_number();
  if (type == "null") return value.is_null();
  return false;
}

inline bool validate_schema(const nlohmann::json& value, const nlohmann::json& schema, std::string* error) {
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = matches_type(value, t.get<std::string>());
    } else {
      for (const auto& alt : t) ok = ok || matches_type(value, alt.get<std::string>());
    }
    if (!ok) {
      *error = "type mismatch against " + t.dump() + " for " + value.dump();
      return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!value.contains(key.get<std::string>())) {
          *error = "missing required key " + key.get<std::string>();
          return false;
        }
      }
    }
    const bool sealed = schema.contains("additionalProperties") && schema["additionalProperties"].is_boolean() &&
                        !schema["additionalProperties"].get<bool>();
    if (schema.contains("properties")) {
      for (const auto& [key, sub] : value.items()) {
        if (schema["properties"].contains(key)) {
          if (!validate_schema(sub, schema["properties"][key], error)) return false;
        } else if (sealed) {
          *error = "unexpected key " + key;
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace oracle
