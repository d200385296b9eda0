#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "drt/config.hpp"
#include "drt/copula.hpp"
#include "drt/synthetic.hpp"

namespace drt {

enum class Command { Train, Predict, Evaluate, Optimize, Pipeline };

std::string to_string(Command c);
/// Throws InvalidArgument for an unknown name.
Command parse_command(std::string_view name);

/// Writes counts.csv, instance.json and config.json (relative paths, same
/// seed) into `out_dir`.
void run_synth(const SyntheticSpec& spec, const std::filesystem::path& out_dir);

/// output/models/<name>.json for every model.
void run_train(const PipelineConfig& config);
/// output/forecasts/<name>.csv over the test range; needs trained models.
void run_predict(const PipelineConfig& config);
/// output/evaluation.csv and output/evaluation.txt; needs forecasts.
void run_evaluate(const PipelineConfig& config);
/// output/optimize/<name>.csv: P histograms of the configured lags.
void run_optimize(const PipelineConfig& config);
/// Train, predict, evaluate, then the strategy comparison: correlation.csv,
/// comparison.csv, histogram.csv, savings.csv, occurrences.txt, strategies.txt.
void run_pipeline(const PipelineConfig& config);

void run_command(const PipelineConfig& config, Command command);

/// Copula on the masked training-range counts.
GaussianCopula fit_count_copula(const CountTable& data, const SplitSpec& split, std::size_t min_lags);

/// Schema versions of the files the commands read and write.
std::string schema_versions();

}  // namespace drt
