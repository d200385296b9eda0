#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "drt/data.hpp"
#include "drt/model.hpp"
#include "drt/quantile.hpp"

namespace drt {

/// Everything a command needs. Paths are resolved against the directory of
/// the config file.
struct PipelineConfig {
    std::filesystem::path data;
    std::filesystem::path instance;
    std::filesystem::path output;
    std::uint64_t seed = 0;
    SplitSpec split = SplitSpec::campus_preset();
    QuantileSet quantiles = QuantileSet::standard();
    std::vector<ModelSpec> models;
    std::size_t copula_min_lags = 30;
    std::size_t samples = 100;
    /// Lags to optimize; defaults to hours 8..18 of the first test day.
    std::vector<HourStamp> lags;
    unsigned threads = 1;
    bool exact_nu = false;
    double median_level = 0.50;
    double robust_level = 0.95;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    /// Throws ConfigError when the data or instance file is missing.
    void check_inputs() const;
};

/// Parses a config document; `base_dir` anchors relative paths.
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                            const std::string& source = "<string>");
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_to_string(const PipelineConfig& config);

std::vector<HourStamp> default_lags(const SplitSpec& split);

}  // namespace drt
