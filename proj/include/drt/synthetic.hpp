#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "drt/data.hpp"
#include "drt/network.hpp"

namespace drt {

/// Parameters of the synthetic movement-count generator.
struct SyntheticSpec {
    int n_locations = 6;
    DateRange dates{Date{2017, 11, 17}, Date{2018, 1, 14}};
    /// Mean multiplier per hour of day (24 values).
    std::vector<double> tod_profile;
    /// Mean multiplier per weekday, Monday first (7 values).
    std::vector<double> dow_profile;
    /// Mean count of a pair at profile 1.
    double base_rate = 12.0;
    /// Per-pair multipliers in (origin, destination) order; empty = drawn
    /// uniformly from [0.5, 1.5] with the seed.
    std::vector<double> pair_scales;
    DateRange exam_period{Date{2017, 12, 8}, Date{2017, 12, 22}};
    double exam_multiplier = 0.7;
    /// Equicorrelation of the noise across pairs.
    double rho = 0.3;
    /// Noise standard deviation = dispersion * sqrt(mean).
    double dispersion = 0.5;
    std::uint64_t seed = 0;

    static std::vector<double> default_tod_profile();
    static std::vector<double> default_dow_profile();

    /// Throws InvalidArgument.
    void validate() const;
};

/// Seasonal mean of a pair at a lag (before noise and rounding).
double synthetic_mean(const SyntheticSpec& spec, std::size_t pair_index, double pair_scale, HourStamp t);

/// counts = round(max(0, mean + dispersion * sqrt(mean) * z)), z jointly normal
/// with equicorrelation rho across pairs. Labels are L1..Ln.
CountTable generate_synthetic(const SyntheticSpec& spec);

/// Campus-like instance for `labels`: demand nodes on a grid, five bus stops,
/// bus ride times from Manhattan distance.
NetworkInstance default_instance(const std::vector<std::string>& labels);

SyntheticSpec parse_synthetic_spec(const std::string& text, const std::string& source = "<string>");
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);
std::string synthetic_spec_to_string(const SyntheticSpec& spec);

}  // namespace drt
