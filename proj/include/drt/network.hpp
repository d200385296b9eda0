#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "drt/data.hpp"

namespace drt {

/// One transit design problem. Demand node i stands for location id i of the
/// count data; ride_time is indexed by bus stop position.
struct NetworkInstance {
    std::vector<Location> demand_nodes;
    std::vector<Location> bus_stops;
    std::vector<std::vector<double>> ride_time;  ///< minutes, [from][to]; diagonal = single-stop turnaround
    double walk_speed = 80.0;                    ///< meters per minute
    int fleet_size = 2;                          ///< K
    double capacity = 10.0;                      ///< gamma, passengers per bus trip
    int max_routes = 2;                          ///< nu
    int max_route_stops = 5;                     ///< L
    double dwell = 0.0;                          ///< minutes added per leg
    bool half_headway = false;                   ///< waiting = tau / (2k) instead of tau / k

    /// Throws InvalidArgument on any violated invariant.
    void validate() const;
};

/// Manhattan distance over speed.
double walk_time(const Location& a, const Location& b, double speed);

struct CandidateRoute {
    int id = 0;
    std::vector<int> stops;  ///< rotation with the smallest stop first
    double tau = 0.0;        ///< cycle time, minutes

    /// "0-2-0" style: stops in visiting order, first stop repeated.
    std::string itinerary() const;
};

/// All loops over 1..L distinct stops, one per rotation class, ordered by
/// length and then lexicographically. Ids are positions in that order.
std::vector<CandidateRoute> enumerate_routes(const NetworkInstance& instance);

/// Number of loops enumerate_routes would produce for n stops.
std::size_t count_routes(std::size_t n_stops, std::size_t max_stops);

/// Time saved per passenger of `pair` riding `route`, using the best board and
/// alight positions; may be negative.
double stage1_utility(const NetworkInstance& instance, const CandidateRoute& route, ODPair pair);

/// Negative mean waiting time on a route with k buses.
double stage2_utility(const NetworkInstance& instance, const CandidateRoute& route, int k);

/// Passengers per hour: 60 k / tau * gamma.
double route_capacity(const CandidateRoute& route, int k, double gamma);

using DemandVector = std::map<ODPair, double>;

struct RouteAllocation {
    int route = 0;
    int buses = 0;
    auto operator<=>(const RouteAllocation&) const = default;
};

/// Allocation identity, sorted by route id.
struct AllocationKey {
    std::vector<RouteAllocation> routes;

    /// Route count, then route ids, then bus counts.
    std::strong_ordering operator<=>(const AllocationKey& other) const;
    bool operator==(const AllocationKey& other) const = default;
    bool empty() const noexcept { return routes.empty(); }
};

struct RouteUsage {
    int route = 0;
    int buses = 0;
    double flow = 0.0;      ///< stage-2 flow
    double capacity = 0.0;  ///< 60 k / tau * gamma
};

struct PairFlow {
    ODPair pair;
    int route = -1;  ///< -1 = walking
    double flow = 0.0;
};

struct RouteDesign {
    std::vector<RouteUsage> routes;  ///< sorted by route id
    std::vector<PairFlow> flows;     ///< stage-1 flows, walking included
    double objective = 0.0;          ///< passenger-minutes saved

    AllocationKey key() const;
};

/// Itineraries joined by " + " with bus counts, e.g. "0-2-0 x2 + 1-2-1 x1";
/// "walk" for the empty allocation.
std::string describe(const AllocationKey& key, const std::vector<CandidateRoute>& routes);

struct SolveOptions {
    /// Require exactly max_routes routes instead of at most.
    bool exact_nu = false;
};

/// Instance plus its candidate set, reusable across demand vectors.
class Network {
public:
    explicit Network(NetworkInstance instance);

    const NetworkInstance& instance() const noexcept { return instance_; }
    const std::vector<CandidateRoute>& routes() const noexcept { return routes_; }

    /// Exact optimum of the design problem for one demand vector.
    RouteDesign solve(const DemandVector& demand, const SolveOptions& options = {}) const;

    /// Optimal flows for a fixed allocation.
    RouteDesign evaluate(const DemandVector& demand, const AllocationKey& allocation) const;

    std::string describe(const AllocationKey& key) const { return drt::describe(key, routes_); }

private:
    NetworkInstance instance_;
    std::vector<CandidateRoute> routes_;
};

RouteDesign solve_instance(const NetworkInstance& instance, const DemandVector& demand,
                           const SolveOptions& options = {});

/// Lists violated constraints (flow balance, demand, capacity, fleet, route
/// count, one bus count per route) beyond `tol`; empty when feasible. The
/// objective is recomputed and compared too.
std::vector<std::string> check_design(const Network& network, const DemandVector& demand, const RouteDesign& design,
                                      const SolveOptions& options = {}, double tol = 1e-9);

NetworkInstance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const NetworkInstance& instance);
NetworkInstance parse_instance(const std::string& text, const std::string& source = "<string>");
std::string instance_to_string(const NetworkInstance& instance);

/// JSON with allocation (itineraries, buses, flow, capacity), stage-1 flows
/// keyed by location labels and the objective.
std::string design_to_json(const Network& network, const RouteDesign& design);

}  // namespace drt
