#include "drt/config.hpp"

#include <algorithm>
#include <set>

#include "drt/error.hpp"
#include "json_io.hpp"

namespace drt {

namespace {

const std::vector<std::string> kFields{"version", "data",    "instance", "output",  "seed",         "split",
                                       "quantiles", "models", "copula",   "samples", "lags",         "threads",
                                       "exact_nu",  "median_level", "robust_level"};

void reject_unknown(const json& j, const std::vector<std::string>& known, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(path + "." + key, "unknown field");
        }
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<HourStamp> parse_lags(const json& j, const std::string& path) {
    std::vector<HourStamp> out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string at = path + "[" + std::to_string(i) + "]";
            if (!j[i].is_string()) throw ConfigError(at, "expected a timestamp string");
            try {
                out.push_back(HourStamp::parse(j[i].get<std::string>()));
            } catch (const Error& e) {
                throw ConfigError(at, e.what());
            }
        }
        return out;
    }
    reject_unknown(j, {"date", "hours"}, path);
    if (!j.contains("date")) throw ConfigError(path + ".date", "missing required field");
    Date date;
    read_field(j, "date", date, path);
    std::vector<int> hours;
    for (int h = 8; h <= 18; ++h) hours.push_back(h);
    read_field(j, "hours", hours, path);
    for (int h : hours) {
        if (h < 0 || h > 23) throw ConfigError(path + ".hours", "hour outside 0..23");
        out.push_back(HourStamp::from(date, h));
    }
    return out;
}

// nlohmann converts negative numbers into huge unsigned values; read signed first.
template <class T>
void read_count(const json& j, const char* key, T& out, const std::string& path, long long min) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
    if (v.is_number_unsigned()) {
        const auto x = v.get<std::uint64_t>();
        if (x < static_cast<std::uint64_t>(min)) throw ConfigError(path + "." + key, "must be at least " + std::to_string(min));
        out = static_cast<T>(x);
        return;
    }
    const auto x = v.get<long long>();
    if (x < min) throw ConfigError(path + "." + key, "must be at least " + std::to_string(min));
    out = static_cast<T>(x);
}

}  // namespace

std::vector<HourStamp> default_lags(const SplitSpec& split) {
    std::vector<HourStamp> out;
    for (int h = 8; h <= 18; ++h) out.push_back(HourStamp::from(split.test.first, h));
    return out;
}

void PipelineConfig::validate() const {
    if (data.empty()) throw ConfigError("config.data", "missing required field");
    if (instance.empty()) throw ConfigError("config.instance", "missing required field");
    if (output.empty()) throw ConfigError("config.output", "missing required field");
    if (models.empty()) throw ConfigError("config.models", "at least one model is required");
    std::set<std::string> names;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const auto& name = models[i].name;
        const std::string at = "config.models[" + std::to_string(i) + "].name";
        if (name.empty() || name.find_first_of("/\\,\n") != std::string::npos || name == "." || name == "..") {
            throw ConfigError(at, "name must be a plain file name without commas");
        }
        if (!names.insert(name).second) throw ConfigError(at, "duplicate model name '" + name + "'");
    }
    if (samples < 1) throw ConfigError("config.samples", "must be at least 1");
    if (copula_min_lags < 2) throw ConfigError("config.copula.min_lags", "must be at least 2");
    if (lags.empty()) throw ConfigError("config.lags", "at least one lag is required");
    for (std::size_t i = 0; i < lags.size(); ++i) {
        if (!split.test.contains(lags[i])) {
            throw ConfigError("config.lags[" + std::to_string(i) + "]", "lag " + lags[i].str() + " is outside the test range");
        }
    }
    if (!quantiles.index_of(median_level)) throw ConfigError("config.median_level", "not one of the quantile levels");
    if (!quantiles.index_of(robust_level)) throw ConfigError("config.robust_level", "not one of the quantile levels");
    if (!quantiles.interior()) throw ConfigError("config.quantiles", "levels must lie strictly inside (0, 1)");
}

void PipelineConfig::check_inputs() const {
    if (!std::filesystem::is_regular_file(data)) throw ConfigError("config.data", "file not found: " + data.string());
    if (!std::filesystem::is_regular_file(instance)) {
        throw ConfigError("config.instance", "file not found: " + instance.string());
    }
}

PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir, const std::string& source) {
    const json j = parse_json(text, source);
    const std::string root = "config";
    reject_unknown(j, kFields, root);
    if (j.contains("version") && j.at("version") != 1) throw ConfigError("config.version", "unsupported version");

    PipelineConfig c;
    c.data = resolve(base_dir, require_field<std::string>(j, "data", root));
    c.instance = resolve(base_dir, require_field<std::string>(j, "instance", root));
    c.output = resolve(base_dir, require_field<std::string>(j, "output", root));
    if (!j.contains("seed")) throw ConfigError("config.seed", "missing required field");
    read_count(j, "seed", c.seed, root, 0);
    read_field(j, "split", c.split, root);

    if (j.contains("quantiles")) {
        std::vector<double> levels;
        read_field(j, "quantiles", levels, root);
        try {
            c.quantiles = QuantileSet(levels);
        } catch (const Error& e) {
            throw ConfigError("config.quantiles", e.what());
        }
    }

    if (j.contains("models")) {
        const json& m = j.at("models");
        if (!m.is_array()) throw ConfigError("config.models", "expected an array");
        for (std::size_t i = 0; i < m.size(); ++i) {
            ModelSpec spec;
            const std::string at = "config.models[" + std::to_string(i) + "]";
            try {
                from_json(m[i], spec);
            } catch (const ConfigError& e) {
                throw ConfigError(at + (e.path().empty() ? "" : "." + e.path()), e.what());
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(at, e.what());
            } catch (const Error& e) {
                throw ConfigError(at, e.what());
            }
            c.models.push_back(spec);
        }
    } else {
        c.models = {ModelSpec::preset("HP"), ModelSpec::preset("LQR3")};
    }

    if (j.contains("copula")) {
        const json& cj = j.at("copula");
        reject_unknown(cj, {"min_lags"}, "config.copula");
        read_count(cj, "min_lags", c.copula_min_lags, "config.copula", 2);
    }
    read_count(j, "samples", c.samples, root, 1);
    c.lags = j.contains("lags") ? parse_lags(j.at("lags"), "config.lags") : default_lags(c.split);
    read_count(j, "threads", c.threads, root, 0);
    read_field(j, "exact_nu", c.exact_nu, root);
    read_field(j, "median_level", c.median_level, root);
    read_field(j, "robust_level", c.robust_level, root);
    c.validate();
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_json_file(path).dump(), path.parent_path(), path.string());
}

std::string config_to_string(const PipelineConfig& c) {
    json j;
    j["version"] = 1;
    j["data"] = c.data.string();
    j["instance"] = c.instance.string();
    j["output"] = c.output.string();
    j["seed"] = c.seed;
    j["split"] = c.split;
    j["quantiles"] = c.quantiles.levels();
    j["models"] = json::array();
    for (const auto& m : c.models) j["models"].push_back(m);
    j["copula"] = {{"min_lags", c.copula_min_lags}};
    j["samples"] = c.samples;
    j["lags"] = json::array();
    for (const auto& t : c.lags) j["lags"].push_back(t.str());
    j["threads"] = c.threads;
    j["exact_nu"] = c.exact_nu;
    j["median_level"] = c.median_level;
    j["robust_level"] = c.robust_level;
    return j.dump(2) + "\n";
}

}  // namespace drt
