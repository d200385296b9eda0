#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "drt/time.hpp"

namespace drt {

struct Location {
    int id = 0;
    std::string label;
    double x = 0.0;  ///< meters
    double y = 0.0;  ///< meters
};

/// Ordered (origin, destination) pair of location ids; origin != destination.
struct ODPair {
    int origin = 0;
    int destination = 0;

    auto operator<=>(const ODPair&) const = default;
};

struct Observation {
    HourStamp stamp;
    std::int64_t count = 0;

    bool operator==(const Observation&) const = default;
};

/// Raw hourly movement counts of one OD pair, strictly increasing in time.
struct ODCountSeries {
    ODPair pair;
    std::vector<Observation> observations;

    std::size_t size() const noexcept { return observations.size(); }
    bool operator==(const ODCountSeries&) const = default;
};

/// Real-valued series on the working scale (differenced, normalized, ...).
struct Series {
    ODPair pair;
    std::vector<HourStamp> stamps;
    std::vector<double> values;

    std::size_t size() const noexcept { return stamps.size(); }
    bool empty() const noexcept { return stamps.empty(); }
    void push_back(HourStamp t, double v) {
        stamps.push_back(t);
        values.push_back(v);
    }
    /// Index of the first lag at or after `t`, i.e. the number of lags before `t`.
    std::size_t lower_index(HourStamp t) const;
    /// Value at exactly `t`, or nullptr.
    const double* find(HourStamp t) const;
};

/// All OD series of one data file, keyed by pair. Location ids index `labels`.
struct CountTable {
    std::vector<std::string> labels;
    std::map<ODPair, ODCountSeries> series;

    int location_id(const std::string& label) const;
    std::string pair_label(ODPair pair) const;
    /// Count at `t` for `pair`, if observed.
    const std::int64_t* count_at(ODPair pair, HourStamp t) const;
    bool operator==(const CountTable&) const = default;
};

/// CSV: `timestamp,origin,destination,count`, header required.
CountTable parse_od_counts(std::istream& in, const std::string& source = "<stream>");
CountTable load_od_counts(const std::filesystem::path& path);
void write_od_counts(std::ostream& out, const CountTable& table);
void save_od_counts(const std::filesystem::path& path, const CountTable& table);

Series to_series(const ODCountSeries& counts);

/// y'_t = y_t - y_{t-1} for hourly-consecutive lags only; the first lag of every
/// contiguous block has no predecessor and is dropped.
Series difference(const ODCountSeries& counts);
Series difference(const Series& series);

/// Train/test partition plus the lags removed before modeling.
struct SplitSpec {
    DateRange train;
    DateRange test;
    std::set<int> masked_hours;
    std::vector<DateRange> masked_dates;

    bool is_masked(HourStamp t) const;
    /// Throws InvalidArgument if ranges overlap or train does not precede test.
    void validate() const;

    /// 17-Nov-2017..7-Jan-2018 train, 8..14-Jan-2018 test, hours 23..06 and
    /// 23-Dec-2017..1-Jan-2018 masked.
    static SplitSpec campus_preset();

    bool operator==(const SplitSpec&) const = default;
};

Series mask_lags(const Series& series, const SplitSpec& spec);
ODCountSeries mask_lags(const ODCountSeries& series, const SplitSpec& spec);

/// Lags of `series` whose date falls inside `range`.
Series select_range(const Series& series, const DateRange& range);

}  // namespace drt
