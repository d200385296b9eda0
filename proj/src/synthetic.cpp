#include "drt/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "drt/copula.hpp"
#include "drt/error.hpp"
#include "json_io.hpp"

namespace drt {

std::vector<double> SyntheticSpec::default_tod_profile() {
    // quiet nights, morning peak, lunch, afternoon return
    return {0.04, 0.03, 0.02, 0.02, 0.02, 0.05, 0.15, 0.45, 1.00, 0.85, 0.70, 0.80,
            1.00, 0.90, 0.70, 0.75, 0.90, 0.80, 0.50, 0.35, 0.25, 0.18, 0.10, 0.06};
}

std::vector<double> SyntheticSpec::default_dow_profile() { return {1.0, 1.0, 1.0, 1.0, 0.9, 0.35, 0.3}; }

void SyntheticSpec::validate() const {
    const auto fail = [](const std::string& what) { throw InvalidArgument("synthetic spec: " + what); };
    if (n_locations < 2) fail("n_locations must be at least 2");
    if (dates.last < dates.first) fail("dates must not be empty");
    const auto check_profile = [&](const std::vector<double>& p, std::size_t n, const char* name) {
        if (!p.empty() && p.size() != n) fail(std::string(name) + " needs " + std::to_string(n) + " values");
        for (double v : p) {
            if (!(v >= 0.0) || !std::isfinite(v)) fail(std::string(name) + " values must be >= 0");
        }
    };
    check_profile(tod_profile, 24, "tod_profile");
    check_profile(dow_profile, 7, "dow_profile");
    const auto n_pairs = static_cast<std::size_t>(n_locations * (n_locations - 1));
    check_profile(pair_scales, n_pairs, "pair_scales");
    if (!(base_rate >= 0.0) || !std::isfinite(base_rate)) fail("base_rate must be >= 0");
    if (!(exam_multiplier >= 0.0) || !std::isfinite(exam_multiplier)) fail("exam_multiplier must be >= 0");
    if (!(rho >= 0.0 && rho <= 1.0)) fail("rho must lie in [0, 1]");
    if (!(dispersion >= 0.0) || !std::isfinite(dispersion)) fail("dispersion must be >= 0");
}

double synthetic_mean(const SyntheticSpec& spec, std::size_t, double pair_scale, HourStamp t) {
    const auto tod = spec.tod_profile.empty() ? SyntheticSpec::default_tod_profile() : spec.tod_profile;
    const auto dow = spec.dow_profile.empty() ? SyntheticSpec::default_dow_profile() : spec.dow_profile;
    double m = spec.base_rate * pair_scale * tod[t.hour()] * dow[t.weekday()];
    if (spec.exam_period.contains(t)) m *= spec.exam_multiplier;
    return m;
}

CountTable generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const int n = spec.n_locations;
    CountTable table;
    for (int i = 0; i < n; ++i) table.labels.push_back("L" + std::to_string(i + 1));
    std::vector<ODPair> pairs;
    for (int o = 0; o < n; ++o)
        for (int d = 0; d < n; ++d)
            if (o != d) pairs.push_back({o, d});

    std::vector<double> scales = spec.pair_scales;
    if (scales.empty()) {
        std::mt19937_64 srng(sample_seed(spec.seed, 0x5ca1e5ULL));
        std::uniform_real_distribution<double> u(0.5, 1.5);
        for (std::size_t i = 0; i < pairs.size(); ++i) scales.push_back(u(srng));
    }

    // Equicorrelated normals: z = sqrt(rho) c + sqrt(1 - rho) e.
    const double a = std::sqrt(spec.rho);
    const double b = std::sqrt(1.0 - spec.rho);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> n01;
    std::vector<double> z(pairs.size());

    for (const auto& p : pairs) table.series[p].pair = p;
    for (auto day = spec.dates.first.serial(); day <= spec.dates.last.serial(); ++day) {
        for (int h = 0; h < 24; ++h) {
            const HourStamp t = HourStamp::from(Date::from_serial(day), h);
            const double common = n01(rng);
            for (auto& v : z) v = a * common + b * n01(rng);
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const double mean = synthetic_mean(spec, i, scales[i], t);
                const double value = mean + spec.dispersion * std::sqrt(mean) * z[i];
                const auto count = static_cast<std::int64_t>(std::llround(std::max(0.0, value)));
                table.series[pairs[i]].observations.push_back({t, count});
            }
        }
    }
    return table;
}

NetworkInstance default_instance(const std::vector<std::string>& labels) {
    NetworkInstance inst;
    const int n = static_cast<int>(labels.size());
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)) * 1.25));
    const double spacing = 500.0;
    for (int i = 0; i < n; ++i) {
        inst.demand_nodes.push_back({i, labels[i], spacing * (i % cols), spacing * (i / cols)});
    }
    const int rows = (n + cols - 1) / cols;
    const double w = spacing * (cols - 1), h = spacing * std::max(rows - 1, 1);
    inst.bus_stops = {{0, "S0", 0.5 * w, 0.5 * h},
                      {1, "S1", 0.0, 0.0},
                      {2, "S2", w, 0.0},
                      {3, "S3", 0.0, h},
                      {4, "S4", w, h}};
    const double bus_speed = 300.0;  // m/min
    inst.ride_time.assign(5, std::vector<double>(5, 2.0));
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            if (i != j) inst.ride_time[i][j] = 0.5 + walk_time(inst.bus_stops[i], inst.bus_stops[j], bus_speed);
        }
    }
    inst.walk_speed = 80.0;
    inst.fleet_size = 2;
    inst.max_routes = 2;
    inst.capacity = 12.0;
    inst.max_route_stops = 5;
    return inst;
}

namespace {

const std::vector<std::string> kSpecFields{"n_locations", "dates",           "tod_profile", "dow_profile",
                                           "base_rate",   "pair_scales",     "exam_period", "exam_multiplier",
                                           "rho",         "dispersion",      "seed"};

}  // namespace

SyntheticSpec parse_synthetic_spec(const std::string& text, const std::string& source) {
    const json j = parse_json(text, source);
    const std::string root = "synthetic";
    if (!j.is_object()) throw ConfigError(root, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(kSpecFields.begin(), kSpecFields.end(), key) == kSpecFields.end()) {
            throw ConfigError(root + "." + key, "unknown field");
        }
    }
    SyntheticSpec s;
    read_field(j, "n_locations", s.n_locations, root);
    read_field(j, "dates", s.dates, root);
    read_field(j, "tod_profile", s.tod_profile, root);
    read_field(j, "dow_profile", s.dow_profile, root);
    read_field(j, "base_rate", s.base_rate, root);
    read_field(j, "pair_scales", s.pair_scales, root);
    read_field(j, "exam_period", s.exam_period, root);
    read_field(j, "exam_multiplier", s.exam_multiplier, root);
    read_field(j, "rho", s.rho, root);
    read_field(j, "dispersion", s.dispersion, root);
    read_field(j, "seed", s.seed, root);
    try {
        s.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(root, e.what());
    }
    return s;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
    return parse_synthetic_spec(read_json_file(path).dump(), path.string());
}

std::string synthetic_spec_to_string(const SyntheticSpec& s) {
    json j;
    j["n_locations"] = s.n_locations;
    j["dates"] = s.dates;
    j["tod_profile"] = s.tod_profile.empty() ? SyntheticSpec::default_tod_profile() : s.tod_profile;
    j["dow_profile"] = s.dow_profile.empty() ? SyntheticSpec::default_dow_profile() : s.dow_profile;
    j["base_rate"] = s.base_rate;
    j["pair_scales"] = s.pair_scales;
    j["exam_period"] = s.exam_period;
    j["exam_multiplier"] = s.exam_multiplier;
    j["rho"] = s.rho;
    j["dispersion"] = s.dispersion;
    j["seed"] = s.seed;
    return j.dump(2) + "\n";
}

}  // namespace drt
