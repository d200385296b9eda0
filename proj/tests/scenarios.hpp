#pragma once

// Design fixtures with known decision boundaries.

#include <vector>

#include "drt/network.hpp"
#include "drt/quantile.hpp"

namespace scenarios {

// One pair L1 -> L2, 22 minutes apart on foot. Route A = 0-1-0 (tau 4, saves
// 20 min, 15 pax/h per bus); route B = 1-2-1 (tau 1, saves 12 min, 60 pax/h
// per bus). Two buses, at most two routes. As demand grows the optimum moves
// walk -> A x2 -> A x1 + B x1 (from 42.5) -> B x2 (from 78.5).
inline drt::NetworkInstance capacity_cliff() {
    drt::NetworkInstance inst;
    inst.demand_nodes = {{0, "L1", 0, 0}, {1, "L2", 2200, 0}};
    inst.bus_stops = {{0, "S0", 0, 0}, {1, "S1", 2200, 0}, {2, "S2", 0, 950}};
    inst.ride_time = {{1, 2, 5}, {2, 1, 0.5}, {5, 0.5, 1}};
    inst.walk_speed = 100;
    inst.fleet_size = 2;
    inst.max_routes = 2;
    inst.capacity = 1;
    inst.max_route_stops = 3;
    return inst;
}

inline constexpr double kCliffLow = 42.5;   // A x2 -> A + B
inline constexpr double kCliffHigh = 78.5;  // A + B -> B x2

inline drt::AllocationKey route_a_twice() { return {{{3, 2}}}; }
inline drt::AllocationKey routes_a_and_b() { return {{{3, 1}, {5, 1}}}; }

inline drt::QuantileForecast forecast(drt::ODPair pair, drt::HourStamp t, std::vector<double> values) {
    drt::QuantileForecast f;
    f.pair = pair;
    f.stamp = t;
    f.levels = drt::QuantileSet::standard().levels();
    f.values = std::move(values);
    return f;
}

// Median below the cliff, 95% level above it; a quarter of the mass at zero.
inline std::vector<double> dispersed_cliff_values() { return {0, 0, 40, 60, 70}; }

}  // namespace scenarios
