#pragma once

#include <map>
#include <utility>

#include "drt/data.hpp"
#include "drt/features.hpp"

namespace drt {

/// Per-pair (weekday, hour) mean and population standard deviation of the
/// training lags. Cells with zero spread (or never seen) pass values through.
class SeasonalStats {
public:
    struct Moments {
        double mean = 0.0;
        double stddev = 0.0;
        std::size_t count = 0;
        bool operator==(const Moments&) const = default;
    };
    using Cell = std::pair<int, int>;

    SeasonalStats() = default;
    /// `train` must contain training lags only.
    explicit SeasonalStats(const History& train);
    static SeasonalStats from_cells(std::map<ODPair, std::map<Cell, Moments>> cells);

    /// True when values at (pair, t) are rescaled; false for passthrough cells.
    bool scales(ODPair pair, HourStamp t) const;
    double normalize(ODPair pair, HourStamp t, double v) const;
    double denormalize(ODPair pair, HourStamp t, double v) const;
    Series normalize(const Series& s) const;
    Series denormalize(const Series& s) const;
    /// Number of passthrough cells among those seen in training.
    std::size_t passthrough_cells() const;

    const std::map<ODPair, std::map<Cell, Moments>>& cells() const noexcept { return cells_; }

private:
    const Moments* lookup(ODPair pair, HourStamp t) const;
    std::map<ODPair, std::map<Cell, Moments>> cells_;
};

}  // namespace drt
