#include "drt/features.hpp"

#include <algorithm>

#include "drt/error.hpp"

namespace drt {

std::vector<double> LagFeatures::flatten(const FeatureConfig& cfg) const {
    std::vector<double> row;
    row.reserve(tod.size() + dow.size() + 1 + ar_lags.size() + cross_lags.size() + od_onehot.size());
    row.insert(row.end(), tod.begin(), tod.end());
    row.insert(row.end(), dow.begin(), dow.end());
    if (cfg.exam_flag) {
        row.push_back(exam);
    }
    if (cfg.cross_lag_order > 0) {
        row.insert(row.end(), cross_lags.begin(), cross_lags.end());
    } else {
        row.insert(row.end(), ar_lags.begin(), ar_lags.end());
    }
    if (cfg.od_onehot) {
        row.insert(row.end(), od_onehot.begin(), od_onehot.end());
    }
    return row;
}

std::size_t feature_length(const FeatureConfig& cfg, std::size_t n_pairs) {
    std::size_t n = kServiceHours + 7;
    n += cfg.exam_flag ? 1 : 0;
    n += cfg.cross_lag_order > 0 ? static_cast<std::size_t>(cfg.cross_lag_order) * n_pairs
                                 : static_cast<std::size_t>(cfg.ar_order);
    n += cfg.od_onehot ? n_pairs : 0;
    return n;
}

bool features_available(const History& history, HourStamp t, ODPair pair, const FeatureConfig& cfg) {
    if (t.hour() < kFirstServiceHour || t.hour() > kLastServiceHour || !history.contains(pair)) {
        return false;
    }
    if (cfg.cross_lag_order > 0) {
        const auto p = static_cast<std::size_t>(cfg.cross_lag_order);
        return std::all_of(history.begin(), history.end(),
                           [&](const auto& kv) { return kv.second.lower_index(t) >= p; });
    }
    return history.at(pair).lower_index(t) >= static_cast<std::size_t>(cfg.ar_order);
}

LagFeatures build_features(const History& history, HourStamp t, ODPair pair, const FeatureConfig& cfg) {
    const int hour = t.hour();
    if (hour < kFirstServiceHour || hour > kLastServiceHour) {
        throw DataError("build_features: hour " + std::to_string(hour) + " of " + t.str() +
                        " is outside service hours");
    }
    const auto own = history.find(pair);
    if (own == history.end()) {
        throw DataError("build_features: no history for requested pair");
    }

    LagFeatures f;
    f.tod[static_cast<std::size_t>(hour - kFirstServiceHour)] = 1;
    f.dow[static_cast<std::size_t>(t.weekday())] = 1;
    f.exam = cfg.exam_period.contains(t) ? 1 : 0;

    if (cfg.cross_lag_order > 0) {
        const auto p = static_cast<std::size_t>(cfg.cross_lag_order);
        f.cross_lags.reserve(p * history.size());
        for (const auto& [other, s] : history) {
            const auto idx = s.lower_index(t);
            if (idx < p) {
                throw DataError("build_features: insufficient history before " + t.str());
            }
            for (std::size_t k = 1; k <= p; ++k) {
                f.cross_lags.push_back(s.values[idx - k]);
            }
        }
    } else {
        const auto p = static_cast<std::size_t>(cfg.ar_order);
        const auto& s = own->second;
        const auto idx = s.lower_index(t);
        if (idx < p) {
            throw DataError("build_features: insufficient history before " + t.str());
        }
        f.ar_lags.reserve(p);
        for (std::size_t k = 1; k <= p; ++k) {
            f.ar_lags.push_back(s.values[idx - k]);
        }
    }

    if (cfg.od_onehot) {
        f.od_onehot.reserve(history.size());
        for (const auto& [other, s] : history) {
            f.od_onehot.push_back(other == pair ? 1 : 0);
        }
    }
    return f;
}

}  // namespace drt
