#include "drt/hp.hpp"

#include <algorithm>

#include "drt/error.hpp"

namespace drt {

HPModel::HPModel(const std::map<ODPair, Series>& train, QuantileSet levels) : levels_(std::move(levels)) {
    for (const auto& [pair, s] : train) {
        auto& cells = buckets_[pair];
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto t = s.stamps[i];
            cells[{t.weekday(), t.hour()}].push_back(Entry{t, s.values[i]});
        }
    }
    for (auto& [pair, cells] : buckets_) {
        for (auto& [cell, bucket] : cells) {
            std::stable_sort(bucket.begin(), bucket.end(),
                             [](const Entry& a, const Entry& b) { return a.stamp < b.stamp; });
        }
    }
}

HPModel HPModel::from_buckets(QuantileSet levels, std::map<ODPair, std::map<Cell, Bucket>> buckets) {
    HPModel m;
    m.levels_ = std::move(levels);
    m.buckets_ = std::move(buckets);
    return m;
}

QuantileForecast HPModel::predict(ODPair pair, HourStamp t) const {
    const Cell cell{t.weekday(), t.hour()};
    std::vector<double> values;
    if (const auto p = buckets_.find(pair); p != buckets_.end()) {
        if (const auto c = p->second.find(cell); c != p->second.end()) {
            for (const auto& e : c->second) {
                if (e.stamp < t) {
                    values.push_back(e.value);
                }
            }
        }
    }
    if (values.empty()) {
        throw DataError("historical percentiles: empty bucket (dow=" + std::to_string(cell.first) +
                        ", tod=" + std::to_string(cell.second) + ") before " + t.str());
    }
    std::sort(values.begin(), values.end());
    QuantileForecast f{pair, t, levels_.levels(), {}};
    f.values.reserve(levels_.size());
    for (double q : levels_) {
        f.values.push_back(interpolated_quantile(values, q));
    }
    postprocess_quantiles(f.values, true);
    return f;
}

}  // namespace drt
