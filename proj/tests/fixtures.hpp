#pragma once

#include <cmath>
#include <random>

#include "drt/data.hpp"

namespace fixtures {

/// Hourly counts for `n_locations` locations (all ordered pairs) over the
/// campus date range, with a daily profile, a weekday effect and Poisson noise.
inline drt::CountTable campus_like(int n_locations, std::uint64_t seed, int first_day_offset = 0) {
    drt::CountTable table;
    for (int i = 0; i < n_locations; ++i) {
        table.labels.push_back("L" + std::to_string(i + 1));
    }
    std::mt19937_64 rng(seed);
    const auto start = drt::Date{2017, 11, 17}.serial() + first_day_offset;
    const auto stop = drt::Date{2018, 1, 14}.serial();
    for (int o = 0; o < n_locations; ++o) {
        for (int d = 0; d < n_locations; ++d) {
            if (o == d) {
                continue;
            }
            const drt::ODPair pair{o, d};
            auto& s = table.series[pair];
            s.pair = pair;
            const double scale = 10.0 + 7.0 * o + 3.0 * d;
            for (auto day = start; day <= stop; ++day) {
                for (int h = 0; h < 24; ++h) {
                    const auto t = drt::HourStamp::from(drt::Date::from_serial(day), h);
                    const double daily = std::max(0.05, std::sin((h - 6) * 3.14159265 / 16.0));
                    const double weekday = t.weekday() >= 5 ? 0.4 : 1.0;
                    std::poisson_distribution<std::int64_t> pois(scale * daily * weekday);
                    s.observations.push_back({t, pois(rng)});
                }
            }
        }
    }
    return table;
}

}  // namespace fixtures
