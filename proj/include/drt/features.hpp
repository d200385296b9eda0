#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "drt/data.hpp"

namespace drt {

/// First and last hour of day carrying a time-of-day indicator.
inline constexpr int kFirstServiceHour = 7;
inline constexpr int kLastServiceHour = 22;
inline constexpr int kServiceHours = kLastServiceHour - kFirstServiceHour + 1;

struct FeatureConfig {
    bool exam_flag = false;
    DateRange exam_period{Date{2017, 12, 8}, Date{2017, 12, 22}};
    /// Autoregressive lags of the pair itself (ignored when cross_lag_order > 0).
    int ar_order = 24;
    /// Indicator per OD pair, for models shared across pairs.
    bool od_onehot = false;
    /// p > 0 replaces the own-lag block by the last p lags of every pair.
    int cross_lag_order = 0;

    bool operator==(const FeatureConfig&) const = default;
};

/// Regressors for one (pair, lag). Lag blocks are positional over retained lags:
/// ar_lags[0] is the most recent retained value before t.
struct LagFeatures {
    std::array<std::uint8_t, kServiceHours> tod{};
    std::array<std::uint8_t, 7> dow{};
    std::uint8_t exam = 0;
    std::vector<double> ar_lags;
    std::vector<std::uint8_t> od_onehot;
    std::vector<double> cross_lags;  ///< pair-major: [pair0 lag1..p, pair1 lag1..p, ...]

    /// Design row in the order tod, dow, [exam], ar|cross, [od].
    std::vector<double> flatten(const FeatureConfig& cfg) const;
};

using History = std::map<ODPair, Series>;

std::size_t feature_length(const FeatureConfig& cfg, std::size_t n_pairs);

/// True when build_features would succeed.
bool features_available(const History& history, HourStamp t, ODPair pair, const FeatureConfig& cfg);

/// Throws DataError when hour(t) is outside the service hours or when fewer
/// than the required number of lags precede t.
LagFeatures build_features(const History& history, HourStamp t, ODPair pair, const FeatureConfig& cfg);

}  // namespace drt
