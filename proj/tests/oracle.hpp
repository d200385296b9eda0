#pragma once

// Brute-force reference for the design solver: every allocation times every
// integer flow split. Utilities are recomputed here from the raw instance.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "drt/network.hpp"

namespace oracle {

struct Result {
    double objective = 0.0;
    drt::AllocationKey key;
    bool unique = true;  // exactly one allocation reaches the optimum
};

inline double manhattan_minutes(const drt::Location& a, const drt::Location& b, double speed) {
    const double dx = a.x > b.x ? a.x - b.x : b.x - a.x;
    const double dy = a.y > b.y ? a.y - b.y : b.y - a.y;
    return (dx + dy) / speed;
}

inline double cycle_time(const drt::NetworkInstance& inst, const std::vector<int>& stops) {
    if (stops.size() == 1) return inst.ride_time[stops[0]][stops[0]] + inst.dwell;
    double t = 0.0;
    for (std::size_t i = 0; i + 1 < stops.size(); ++i) t += inst.ride_time[stops[i]][stops[i + 1]] + inst.dwell;
    return t + inst.ride_time[stops.back()][stops.front()] + inst.dwell;
}

inline double saving(const drt::NetworkInstance& inst, const std::vector<int>& stops, drt::ODPair pair) {
    const auto& o = inst.demand_nodes[pair.origin];
    const auto& d = inst.demand_nodes[pair.destination];
    const double v = inst.walk_speed;
    const double direct = manhattan_minutes(o, d, v);
    const std::size_t m = stops.size();
    double best = 1e300;
    for (std::size_t b = 0; b < m; ++b) {
        for (std::size_t a = 0; a < m; ++a) {
            if (a == b && m > 1) continue;
            double ride = 0.0;
            std::size_t pos = b;
            while (pos != a) {
                const std::size_t next = (pos + 1) % m;
                ride += inst.ride_time[stops[pos]][stops[next]] + inst.dwell;
                pos = next;
            }
            const double total = manhattan_minutes(o, inst.bus_stops[stops[b]], v) + ride +
                                 manhattan_minutes(inst.bus_stops[stops[a]], d, v);
            if (total < best) best = total;
        }
    }
    return direct - best;
}

inline Result solve(const drt::NetworkInstance& inst, const drt::DemandVector& demand, double grid_step = 1.0,
                    bool exact_nu = false) {
    std::vector<drt::ODPair> pairs;
    std::vector<long> units;
    for (const auto& [p, l] : demand) {
        if (l <= 0.0) continue;
        const double u = l / grid_step;
        if (std::abs(u - std::round(u)) > 1e-9) throw std::invalid_argument("oracle: demand off the grid");
        pairs.push_back(p);
        units.push_back(std::lround(u));
    }
    if (inst.bus_stops.size() > 3 || pairs.size() > 2 || inst.fleet_size > 2) {
        throw std::invalid_argument("oracle: instance too large");
    }
    const auto routes = drt::enumerate_routes(inst);
    const int R = static_cast<int>(routes.size());
    const int K = inst.fleet_size;
    const int nu = inst.max_routes;

    // All allocations as (route ids ascending, bus counts).
    std::vector<std::vector<drt::RouteAllocation>> allocations;
    std::vector<drt::RouteAllocation> cur;
    auto rec = [&](auto&& self, int next_route, int buses_left) -> void {
        const int n = static_cast<int>(cur.size());
        if (exact_nu ? n == nu : true) allocations.push_back(cur);
        if (n == nu) return;
        for (int r = next_route; r < R; ++r) {
            for (int k = 1; k <= buses_left; ++k) {
                cur.push_back({r, k});
                self(self, r + 1, buses_left - k);
                cur.pop_back();
            }
        }
    };
    rec(rec, 0, K);

    std::map<drt::AllocationKey, double> best_by_key;
    for (const auto& alloc : allocations) {
        const std::size_t m = alloc.size();
        std::vector<double> cap(m), wait(m);
        std::vector<std::vector<double>> gain(pairs.size(), std::vector<double>(m));
        for (std::size_t r = 0; r < m; ++r) {
            const auto& stops = routes[alloc[r].route].stops;
            const double tau = cycle_time(inst, stops);
            cap[r] = 60.0 * alloc[r].buses * inst.capacity / tau;
            wait[r] = (inst.half_headway ? 0.5 : 1.0) * tau / alloc[r].buses;
            for (std::size_t p = 0; p < pairs.size(); ++p) gain[p][r] = saving(inst, stops, pairs[p]);
        }
        // x[p][r] units of pair p on route r; the rest walks.
        std::vector<std::vector<long>> x(pairs.size(), std::vector<long>(m, 0));
        double best = -1e300;
        std::vector<double> best_load;
        auto fill = [&](auto&& self, std::size_t p, std::size_t r, long left) -> void {
            if (p == pairs.size()) {
                std::vector<double> load(m, 0.0);
                double obj = 0.0;
                for (std::size_t q = 0; q < pairs.size(); ++q) {
                    for (std::size_t s = 0; s < m; ++s) {
                        const double f = static_cast<double>(x[q][s]) * grid_step;
                        load[s] += f;
                        obj += f * gain[q][s];
                    }
                }
                for (std::size_t s = 0; s < m; ++s) {
                    if (load[s] > cap[s] + 1e-9) return;
                    obj -= wait[s] * load[s];
                }
                if (obj > best + 1e-12) {
                    best = obj;
                    best_load = load;
                }
                return;
            }
            if (r == m) {
                self(self, p + 1, 0, p + 1 < pairs.size() ? units[p + 1] : 0);
                return;
            }
            for (long v = 0; v <= left; ++v) {
                x[p][r] = v;
                self(self, p, r + 1, left - v);
            }
            x[p][r] = 0;
        };
        fill(fill, 0, 0, pairs.empty() ? 0 : units[0]);

        drt::AllocationKey key;
        for (std::size_t r = 0; r < m; ++r) {
            if (exact_nu || best_load[r] > 1e-9) key.routes.push_back(alloc[r]);
        }
        auto [it, inserted] = best_by_key.emplace(key, best);
        if (!inserted && best > it->second) it->second = best;
    }

    Result res;
    res.objective = -1e300;
    for (const auto& [key, obj] : best_by_key) res.objective = std::max(res.objective, obj);
    int hits = 0;
    for (const auto& [key, obj] : best_by_key) {
        if (obj >= res.objective - 1e-9 * std::max(1.0, std::abs(res.objective))) {
            if (hits == 0) res.key = key;  // map order equals the tie-break order
            ++hits;
        }
    }
    res.unique = hits == 1;
    return res;
}

}  // namespace oracle
