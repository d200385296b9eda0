#pragma once

#include <map>
#include <utility>
#include <vector>

#include "drt/data.hpp"
#include "drt/quantile.hpp"

namespace drt {

/// Historical percentiles per (pair, weekday, hour of day) on the count scale.
class HPModel {
public:
    struct Entry {
        HourStamp stamp;
        double value = 0.0;
        bool operator==(const Entry&) const = default;
    };
    using Cell = std::pair<int, int>;  ///< (weekday 0=Mon, hour)
    using Bucket = std::vector<Entry>;  ///< ordered by stamp

    HPModel() = default;
    /// `train` holds masked count-scale training series.
    HPModel(const std::map<ODPair, Series>& train, QuantileSet levels);

    /// Percentiles of the bucket values observed strictly before t. Throws
    /// DataError naming the cell when there are none.
    QuantileForecast predict(ODPair pair, HourStamp t) const;

    const QuantileSet& levels() const noexcept { return levels_; }
    const std::map<ODPair, std::map<Cell, Bucket>>& buckets() const noexcept { return buckets_; }
    /// Rebuild from serialized buckets.
    static HPModel from_buckets(QuantileSet levels, std::map<ODPair, std::map<Cell, Bucket>> buckets);

private:
    QuantileSet levels_;
    std::map<ODPair, std::map<Cell, Bucket>> buckets_;
};

}  // namespace drt
