#pragma once

// nlohmann/json converters for library value types (internal).

#include <optional>
#include <string>

#include <json.hpp>

#include "drt/data.hpp"
#include "drt/error.hpp"
#include "drt/features.hpp"
#include "drt/gboost.hpp"
#include "drt/lqr.hpp"
#include "drt/model.hpp"
#include "drt/time.hpp"
#include "drt/tuning.hpp"

namespace drt {

using json = nlohmann::json;

/// Parses text, mapping syntax errors to ConfigError.
json parse_json(const std::string& text, const std::string& source);
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

/// Reads `key` of `j` when present; wraps type errors into ConfigError(path.key).
template <class T>
void read_field(const json& j, const char* key, T& out, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        out = it->template get<T>();
    } catch (const ConfigError& e) {
        throw ConfigError(path + "." + key + (e.path().empty() ? "" : "." + e.path()), e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + "." + key, e.what());
    } catch (const Error& e) {
        throw ConfigError(path + "." + key, e.what());
    }
}

/// Like read_field, but updates `out` in place so absent members keep their
/// current values.
template <class T>
void merge_field(const json& j, const char* key, T& out, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        from_json(*it, out);
    } catch (const ConfigError& e) {
        throw ConfigError(path + "." + key + (e.path().empty() ? "" : "." + e.path()), e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + "." + key, e.what());
    } catch (const Error& e) {
        throw ConfigError(path + "." + key, e.what());
    }
}

template <class T>
T require_field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(path + "." + key, "missing required field");
    }
    T out{};
    read_field(j, key, out, path);
    return out;
}

void to_json(json& j, const Date& d);
void from_json(const json& j, Date& d);
void to_json(json& j, const HourStamp& t);
void from_json(const json& j, HourStamp& t);
void to_json(json& j, const DateRange& r);
void from_json(const json& j, DateRange& r);
void to_json(json& j, const ODPair& p);
void from_json(const json& j, ODPair& p);
void to_json(json& j, const SplitSpec& s);
void from_json(const json& j, SplitSpec& s);
void to_json(json& j, const FeatureConfig& c);
void from_json(const json& j, FeatureConfig& c);
void to_json(json& j, const LqrOptions& o);
void from_json(const json& j, LqrOptions& o);
void to_json(json& j, const GBoostParams& p);
void from_json(const json& j, GBoostParams& p);
void to_json(json& j, const GBoostGrid& g);
void from_json(const json& j, GBoostGrid& g);
void to_json(json& j, const ModelSpec& s);
void from_json(const json& j, ModelSpec& s);

}  // namespace drt
