#include "json_io.hpp"

#include <fstream>
#include <sstream>

namespace drt {

json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source, e.what());
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path.string());
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << j.dump(2) << '\n';
}

void to_json(json& j, const Date& d) { j = d.str(); }
void from_json(const json& j, Date& d) { d = Date::parse(j.get<std::string>()); }
void to_json(json& j, const HourStamp& t) { j = t.str(); }
void from_json(const json& j, HourStamp& t) { t = HourStamp::parse(j.get<std::string>()); }

void to_json(json& j, const DateRange& r) { j = json::array({r.first, r.last}); }
void from_json(const json& j, DateRange& r) {
    if (!j.is_array() || j.size() != 2) {
        throw ConfigError("", "expected [first, last] date pair");
    }
    r.first = j[0].get<Date>();
    r.last = j[1].get<Date>();
    if (r.last < r.first) {
        throw ConfigError("", "date range ends before it starts");
    }
}

void to_json(json& j, const ODPair& p) { j = json::array({p.origin, p.destination}); }
void from_json(const json& j, ODPair& p) {
    if (!j.is_array() || j.size() != 2) {
        throw ConfigError("", "expected [origin, destination]");
    }
    p.origin = j[0].get<int>();
    p.destination = j[1].get<int>();
}

void to_json(json& j, const SplitSpec& s) {
    j = json{{"train", s.train}, {"test", s.test}, {"masked_hours", s.masked_hours}, {"masked_dates", s.masked_dates}};
}
void from_json(const json& j, SplitSpec& s) {
    if (j.is_string()) {
        if (j.get<std::string>() != "campus") {
            throw ConfigError("", "unknown split preset '" + j.get<std::string>() + "'");
        }
        s = SplitSpec::campus_preset();
        return;
    }
    SplitSpec out = SplitSpec::campus_preset();
    if (j.contains("preset")) {
        if (j.at("preset").get<std::string>() != "campus") {
            throw ConfigError("preset", "unknown split preset");
        }
    }
    read_field(j, "train", out.train, "");
    read_field(j, "test", out.test, "");
    read_field(j, "masked_hours", out.masked_hours, "");
    read_field(j, "masked_dates", out.masked_dates, "");
    for (int h : out.masked_hours) {
        if (h < 0 || h > 23) {
            throw ConfigError("masked_hours", "hour outside 0..23");
        }
    }
    try {
        out.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("", e.what());
    }
    s = out;
}

void to_json(json& j, const FeatureConfig& c) {
    j = json{{"exam_flag", c.exam_flag}, {"exam_period", c.exam_period}, {"ar_order", c.ar_order},
             {"od_onehot", c.od_onehot}, {"cross_lag_order", c.cross_lag_order}};
}
void from_json(const json& j, FeatureConfig& c) {
    read_field(j, "exam_flag", c.exam_flag, "");
    read_field(j, "exam_period", c.exam_period, "");
    read_field(j, "ar_order", c.ar_order, "");
    read_field(j, "od_onehot", c.od_onehot, "");
    read_field(j, "cross_lag_order", c.cross_lag_order, "");
    if (c.ar_order < 0 || c.cross_lag_order < 0) {
        throw ConfigError("", "lag orders must be non-negative");
    }
}

void to_json(json& j, const LqrOptions& o) {
    j = json{{"tolerance", o.tolerance}, {"max_iterations", o.max_iterations}};
}
void from_json(const json& j, LqrOptions& o) {
    read_field(j, "tolerance", o.tolerance, "");
    read_field(j, "max_iterations", o.max_iterations, "");
    if (!(o.tolerance > 0.0) || o.max_iterations < 1) {
        throw ConfigError("", "tolerance and max_iterations must be positive");
    }
}

void to_json(json& j, const GBoostParams& p) {
    j = json{{"learning_rate", p.learning_rate},
             {"max_depth", p.max_depth},
             {"n_trees", p.n_trees},
             {"init", p.init == GBoostInit::Zero ? "zero" : "quantile"},
             {"max_bins", p.max_bins},
             {"min_leaf", p.min_leaf},
             {"subsample", p.subsample},
             {"seed", p.seed}};
}
void from_json(const json& j, GBoostParams& p) {
    read_field(j, "learning_rate", p.learning_rate, "");
    read_field(j, "max_depth", p.max_depth, "");
    read_field(j, "n_trees", p.n_trees, "");
    if (j.contains("init")) {
        const auto s = j.at("init").get<std::string>();
        if (s == "zero") {
            p.init = GBoostInit::Zero;
        } else if (s == "quantile") {
            p.init = GBoostInit::Quantile;
        } else {
            throw ConfigError("init", "expected 'quantile' or 'zero'");
        }
    }
    read_field(j, "max_bins", p.max_bins, "");
    read_field(j, "min_leaf", p.min_leaf, "");
    read_field(j, "subsample", p.subsample, "");
    read_field(j, "seed", p.seed, "");
    try {
        p.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("", e.what());
    }
}

void to_json(json& j, const GBoostGrid& g) {
    j = json{{"learning_rates", g.learning_rates}, {"max_depths", g.max_depths}, {"n_trees", g.n_trees}};
}
void from_json(const json& j, GBoostGrid& g) {
    read_field(j, "learning_rates", g.learning_rates, "");
    read_field(j, "max_depths", g.max_depths, "");
    read_field(j, "n_trees", g.n_trees, "");
    if (g.learning_rates.empty() || g.max_depths.empty() || g.n_trees.empty()) {
        throw ConfigError("", "grid axes must be non-empty");
    }
}

void to_json(json& j, const ModelSpec& s) {
    j = json{{"name", s.name},
             {"family", to_string(s.family)},
             {"scope", to_string(s.scope)},
             {"features", s.features},
             {"sort_quantiles", s.sort_quantiles},
             {"seasonal", s.seasonal},
             {"skip_train_days", s.skip_train_days},
             {"lqr", s.lqr},
             {"gboost", s.gboost},
             {"tune", to_string(s.tune)},
             {"patience", s.patience}};
    if (s.grid) {
        j["grid"] = *s.grid;
    }
}
void from_json(const json& j, ModelSpec& s) {
    if (j.is_string()) {
        s = ModelSpec::preset(j.get<std::string>());
        return;
    }
    ModelSpec out;
    if (j.contains("preset")) {
        out = ModelSpec::preset(j.at("preset").get<std::string>());
    }
    read_field(j, "name", out.name, "");
    if (j.contains("family")) {
        out.family = parse_model_family(j.at("family").get<std::string>());
    }
    if (j.contains("scope")) {
        out.scope = parse_model_scope(j.at("scope").get<std::string>());
    }
    merge_field(j, "features", out.features, "");
    read_field(j, "sort_quantiles", out.sort_quantiles, "");
    read_field(j, "seasonal", out.seasonal, "");
    read_field(j, "skip_train_days", out.skip_train_days, "");
    merge_field(j, "lqr", out.lqr, "");
    merge_field(j, "gboost", out.gboost, "");
    if (j.contains("grid")) {
        if (j.at("grid").is_null()) {
            out.grid.reset();
        } else {
            GBoostGrid g;
            read_field(j, "grid", g, "");
            out.grid = g;
        }
    }
    if (j.contains("tune")) {
        out.tune = parse_tune_granularity(j.at("tune").get<std::string>());
    }
    read_field(j, "patience", out.patience, "");
    if (out.skip_train_days < 0 || out.patience < 1) {
        throw ConfigError("", "skip_train_days must be >= 0 and patience >= 1");
    }
    s = out;
}

}  // namespace drt
