#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "drt/data.hpp"
#include "drt/quantile.hpp"

namespace drt {

/// Total over levels of the mean tilted loss. `truths` must share the
/// forecasts' stamps in order; throws InvalidArgument otherwise.
double mtl(std::span<const QuantileForecast> forecasts, const Series& truths);

/// Fraction of lags with q05 <= y <= q95.
double icp(std::span<const QuantileForecast> forecasts, const Series& truths);

/// Mean width q95 - q05.
double mil(std::span<const QuantileForecast> forecasts);

/// Number of level pairs (q_i < q_j) with yhat_i > yhat_j, summed over lags.
long crossings(std::span<const QuantileForecast> forecasts);

struct PairMetrics {
    ODPair pair;
    std::size_t lags = 0;
    double mtl = 0.0;
    double icp = 0.0;
    double mil = 0.0;
    long crossings = 0;
};

/// Mean and population standard deviation across pairs.
struct Spread {
    double mean = 0.0;
    double stddev = 0.0;
};

struct EvalReport {
    std::string model;
    std::vector<PairMetrics> pairs;
    double total_mtl = 0.0;
    Spread icp;
    Spread mil;
    Spread crossings;
};

/// Scores every pair of `forecasts` against the observed counts in `truths`.
EvalReport evaluate(const ForecastTable& forecasts, const CountTable& truths, std::string model_name);

/// Per-pair rows plus one aggregate row per report.
void write_reports_csv(std::ostream& out, std::span<const EvalReport> reports, const std::vector<std::string>& labels);

/// Fixed-width table: model, total MTL, mean ICP, mean MIL, mean #cross (with
/// standard deviations).
std::string format_reports_table(std::span<const EvalReport> reports);

}  // namespace drt
