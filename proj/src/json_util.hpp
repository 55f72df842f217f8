#pragma once
// Internal helpers for strict JSON handling: unknown keys are an error,
// wrong types are an error, and file problems surface as IoFailure.

#include "qflow/errors.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>

namespace qflow::detail {

using nlohmann::json;

inline json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for reading");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaViolation, path.string() + ": " + e.what());
    }
    return j;
}

inline void save_json_file(const json& j, const std::filesystem::path& path, int indent = 2) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
    out << j.dump(indent) << "\n";
    if (!out) throw Error(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

inline void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorCode::SchemaViolation, where + " must be an object");
}

inline void require_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorCode::SchemaViolation, where + " must be an array");
}

/// Rejects keys outside the allowed set.
inline void require_keys(const json& j, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    require_object(j, where);
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* candidate : allowed)
            if (key == candidate) { known = true; break; }
        if (!known) throw Error(ErrorCode::SchemaViolation, where + ": unknown key '" + key + "'");
    }
}

inline double get_number(const json& j, const std::string& where, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) throw Error(ErrorCode::SchemaViolation, where + "." + key + " must be a number");
    return v.get<double>();
}

inline double require_number(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) throw Error(ErrorCode::SchemaViolation, where + " missing key '" + std::string(key) + "'");
    return get_number(j, where, key, 0.0);
}

inline int get_int(const json& j, const std::string& where, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw Error(ErrorCode::SchemaViolation, where + "." + key + " must be an integer");
    return v.get<int>();
}

inline std::uint64_t get_uint64(const json& j, const std::string& where, const char* key, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0 && !v.is_number_unsigned()))
        throw Error(ErrorCode::SchemaViolation, where + "." + key + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

inline std::string get_string(const json& j, const std::string& where, const char* key,
                              const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string()) throw Error(ErrorCode::SchemaViolation, where + "." + key + " must be a string");
    return v.get<std::string>();
}

inline std::string require_string(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) throw Error(ErrorCode::SchemaViolation, where + " missing key '" + std::string(key) + "'");
    return get_string(j, where, key, "");
}

inline bool get_bool(const json& j, const std::string& where, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean()) throw Error(ErrorCode::SchemaViolation, where + "." + key + " must be a boolean");
    return v.get<bool>();
}

} // namespace qflow::detail
