#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drt/data.hpp"

namespace drt {

/// Strictly increasing quantile levels in [0, 1].
class QuantileSet {
public:
    QuantileSet() : QuantileSet(standard()) {}
    explicit QuantileSet(std::vector<double> levels);

    /// {0.05, 0.25, 0.50, 0.75, 0.95}
    static QuantileSet standard();

    std::size_t size() const noexcept { return levels_.size(); }
    double operator[](std::size_t i) const { return levels_[i]; }
    const std::vector<double>& levels() const noexcept { return levels_; }
    std::optional<std::size_t> index_of(double q) const;
    /// True when every level lies strictly inside (0, 1).
    bool interior() const;

    auto begin() const { return levels_.begin(); }
    auto end() const { return levels_.end(); }
    bool operator==(const QuantileSet&) const = default;

private:
    std::vector<double> levels_;
};

/// Predictive marginal of one pair at one lag, on the count scale.
struct QuantileForecast {
    ODPair pair;
    HourStamp stamp;
    std::vector<double> levels;
    std::vector<double> values;

    /// Value at level q; throws InvalidArgument when q is not a forecast level.
    double at(double q) const;
    bool operator==(const QuantileForecast&) const = default;
};

using ForecastTable = std::map<ODPair, std::vector<QuantileForecast>>;

/// Pinball loss max(q*(y - yhat), (q - 1)*(y - yhat)).
double tilted_loss(double q, double y, double yhat);

/// Mean tilted loss of a constant prediction over a sample.
double mean_tilted_loss(double q, std::span<const double> sample, double constant);

/// Linear-interpolation percentile of a sorted sample (position q*(n-1)).
double interpolated_quantile(std::span<const double> sorted, double q);

/// Smallest order statistic x with F_n(x) >= q: a minimizer of the mean tilted
/// loss over constants.
double lower_quantile(std::span<const double> sorted, double q);

/// Clip every value at 0, then optionally sort ascending.
void postprocess_quantiles(std::vector<double>& values, bool sort);

/// CSV `timestamp,origin,destination,q,value`; rows ordered by pair, time, level.
void write_forecasts(std::ostream& out, const ForecastTable& table, const std::vector<std::string>& labels);
ForecastTable read_forecasts(std::istream& in, const std::vector<std::string>& labels,
                             const std::string& source = "<stream>");
void save_forecasts(const std::filesystem::path& path, const ForecastTable& table,
                    const std::vector<std::string>& labels);
ForecastTable load_forecasts(const std::filesystem::path& path, const std::vector<std::string>& labels);

/// Shortest round-trip decimal representation used by every CSV writer.
std::string format_double(double v);

}  // namespace drt
