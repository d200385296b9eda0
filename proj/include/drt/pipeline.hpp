#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "drt/copula.hpp"
#include "drt/data.hpp"
#include "drt/network.hpp"
#include "drt/quantile.hpp"

namespace drt {

/// Forecasts of every pair for one lag.
using LagForecast = std::map<ODPair, QuantileForecast>;

struct SampleSolution {
    AllocationKey key;
    double objective = 0.0;
};

struct KeyCount {
    AllocationKey key;
    std::size_t count = 0;
    double mean_objective = 0.0;  ///< mean per-sample optimum among these samples
};

struct ScenarioResult {
    HourStamp lag;
    std::vector<SampleSolution> samples;
    /// Most frequent first; ties by higher mean objective, then key order.
    std::vector<KeyCount> histogram;
    /// Design of the first sample that produced the modal allocation.
    RouteDesign chosen;
    /// Mean per-sample optimum.
    double mean_time_savings = 0.0;
    /// Mean objective of the modal allocation re-evaluated on every sample.
    double chosen_expected = 0.0;

    const AllocationKey& chosen_key() const { return histogram.front().key; }
    std::size_t chosen_count() const { return histogram.front().count; }
};

/// Forecasts of `lag` from a table; throws DataError when a pair lacks one.
LagForecast forecasts_at(const ForecastTable& table, HourStamp lag);

/// Draw k joint demand vectors, solve each, and pick the most frequent
/// allocation. Results depend only on `seed`, not on `threads`.
ScenarioResult optimize_lag(const GaussianCopula& copula, const LagForecast& forecasts, const Network& network,
                            std::size_t k, std::uint64_t seed, const SolveOptions& options = {},
                            unsigned threads = 1);

/// Single solve with every pair's demand at forecast level q (clipped at 0).
RouteDesign optimize_point(const LagForecast& forecasts, double q, const Network& network,
                           const SolveOptions& options = {});

/// Single solve with the observed counts of `lag` for `pairs`.
RouteDesign optimize_ground_truth(const CountTable& truth, HourStamp lag, const std::vector<ODPair>& pairs,
                                  const Network& network, const SolveOptions& options = {});

/// Throws DataError when the network cannot host the data's locations: too
/// few demand nodes, or labeled nodes whose labels differ from the data's.
void check_network_labels(const Network& network, const std::vector<std::string>& labels);

struct ComparisonRow {
    HourStamp lag;
    std::string model;
    RouteDesign ground_truth;
    ScenarioResult proposed;
    RouteDesign median;
    RouteDesign robust;
    double hourly_mtl = 0.0;  ///< mean tilted loss over pairs and levels at this lag

    bool proposed_match() const { return proposed.chosen_key() == ground_truth.key(); }
    bool median_match() const { return median.key() == ground_truth.key(); }
    bool robust_match() const { return robust.key() == ground_truth.key(); }
};

struct NamedForecasts {
    std::string model;
    ForecastTable table;
};

struct CompareOptions {
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    double median_level = 0.50;
    double robust_level = 0.95;
    SolveOptions solve;
    unsigned threads = 1;
};

/// Rows ordered by lag, then model in the given order. Every model at a lag
/// uses the same sample seed.
std::vector<ComparisonRow> compare_strategies(const std::vector<HourStamp>& lags,
                                              const std::vector<NamedForecasts>& models, const CountTable& truth,
                                              const GaussianCopula& copula, const Network& network,
                                              const CompareOptions& options);

/// Seed of the sampler at one lag.
std::uint64_t lag_seed(std::uint64_t seed, HourStamp lag);

/// One row per (lag, model): GT, P, M, R allocations, match flags, P counts
/// and objectives.
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows, const Network& network);
/// One row per (lag, model, allocation) of the P histogram.
void write_histogram_csv(std::ostream& out, const std::vector<ComparisonRow>& rows, const Network& network);
/// Per (lag, model): hourly MTL, mean per-sample optimum, chosen-design mean.
void write_savings_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// Occurrence table: per hour, the GT allocation and each model's ranked P
/// allocations with counts, stopping at the GT allocation (shown as "*").
std::string format_occurrence_table(const std::vector<ComparisonRow>& rows, const Network& network);
/// Strategy table: per hour, GT and P/M/R per model; "*" marks a GT match.
std::string format_strategy_table(const std::vector<ComparisonRow>& rows, const Network& network);

}  // namespace drt
