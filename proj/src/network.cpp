#include "drt/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "drt/error.hpp"
#include "json_io.hpp"

namespace drt {

void NetworkInstance::validate() const {
    const auto fail = [](const std::string& what) { throw InvalidArgument("network instance: " + what); };
    if (demand_nodes.size() < 2) fail("need at least two demand nodes");
    if (bus_stops.empty()) fail("need at least one bus stop");
    if (ride_time.size() != bus_stops.size()) fail("ride_time must be a square matrix over bus stops");
    for (const auto& row : ride_time) {
        if (row.size() != bus_stops.size()) fail("ride_time must be a square matrix over bus stops");
        for (double v : row) {
            if (!(v > 0.0) || !std::isfinite(v)) fail("ride times must be positive and finite");
        }
    }
    if (!(walk_speed > 0.0) || !std::isfinite(walk_speed)) fail("walk_speed must be positive");
    if (fleet_size < 1) fail("fleet_size must be at least 1");
    if (!(capacity > 0.0)) fail("capacity must be positive");
    if (max_routes < 1 || max_routes > fleet_size) fail("max_routes must lie in [1, fleet_size]");
    if (max_route_stops < 1) fail("max_route_stops must be at least 1");
    if (!(dwell >= 0.0) || !std::isfinite(dwell)) fail("dwell must be non-negative");
    for (const auto& l : demand_nodes) {
        if (!std::isfinite(l.x) || !std::isfinite(l.y)) fail("coordinates must be finite");
    }
    for (const auto& l : bus_stops) {
        if (!std::isfinite(l.x) || !std::isfinite(l.y)) fail("coordinates must be finite");
    }
}

double walk_time(const Location& a, const Location& b, double speed) {
    return (std::abs(a.x - b.x) + std::abs(a.y - b.y)) / speed;
}

std::string CandidateRoute::itinerary() const {
    std::string s;
    for (int stop : stops) {
        s += std::to_string(stop) + "-";
    }
    return s + std::to_string(stops.front());
}

namespace {

double loop_time(const NetworkInstance& inst, const std::vector<int>& stops) {
    if (stops.size() == 1) {
        return inst.ride_time[stops[0]][stops[0]] + inst.dwell;
    }
    double tau = 0.0;
    for (std::size_t i = 0; i < stops.size(); ++i) {
        tau += inst.ride_time[stops[i]][stops[(i + 1) % stops.size()]] + inst.dwell;
    }
    return tau;
}

// Extends `prefix` (whose first element is its minimum) to every permutation of
// length m with all later elements larger than the first.
void extend(const NetworkInstance& inst, std::size_t m, std::vector<int>& prefix, std::vector<bool>& used,
            std::vector<CandidateRoute>& out) {
    if (prefix.size() == m) {
        CandidateRoute r;
        r.id = static_cast<int>(out.size());
        r.stops = prefix;
        r.tau = loop_time(inst, prefix);
        out.push_back(std::move(r));
        return;
    }
    const int n = static_cast<int>(inst.bus_stops.size());
    for (int s = prefix.front() + 1; s < n; ++s) {
        if (used[s]) continue;
        used[s] = true;
        prefix.push_back(s);
        extend(inst, m, prefix, used, out);
        prefix.pop_back();
        used[s] = false;
    }
}

}  // namespace

std::vector<CandidateRoute> enumerate_routes(const NetworkInstance& instance) {
    instance.validate();
    std::vector<CandidateRoute> out;
    const int n = static_cast<int>(instance.bus_stops.size());
    const std::size_t max_len = std::min<std::size_t>(static_cast<std::size_t>(instance.max_route_stops), n);
    for (std::size_t m = 1; m <= max_len; ++m) {
        for (int first = 0; first < n; ++first) {
            std::vector<int> prefix{first};
            std::vector<bool> used(n, false);
            used[first] = true;
            extend(instance, m, prefix, used, out);
        }
    }
    return out;
}

std::size_t count_routes(std::size_t n_stops, std::size_t max_stops) {
    std::size_t total = 0;
    for (std::size_t m = 1; m <= std::min(n_stops, max_stops); ++m) {
        std::size_t perms = 1;  // P(n, m) / m
        for (std::size_t i = 0; i < m; ++i) perms *= n_stops - i;
        total += perms / m;
    }
    return total;
}

double stage1_utility(const NetworkInstance& instance, const CandidateRoute& route, ODPair pair) {
    const auto& o = instance.demand_nodes.at(pair.origin);
    const auto& d = instance.demand_nodes.at(pair.destination);
    const double direct = walk_time(o, d, instance.walk_speed);
    const std::size_t m = route.stops.size();

    double best = std::numeric_limits<double>::infinity();
    if (m == 1) {
        const auto& s = instance.bus_stops[route.stops[0]];
        best = walk_time(o, s, instance.walk_speed) + walk_time(s, d, instance.walk_speed);
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            const double access = walk_time(o, instance.bus_stops[route.stops[i]], instance.walk_speed);
            double ride = 0.0;
            for (std::size_t step = 1; step < m; ++step) {
                const std::size_t from = route.stops[(i + step - 1) % m];
                const std::size_t to = route.stops[(i + step) % m];
                ride += instance.ride_time[from][to] + instance.dwell;
                const double egress = walk_time(instance.bus_stops[to], d, instance.walk_speed);
                best = std::min(best, access + ride + egress);
            }
        }
    }
    return direct - best;
}

double stage2_utility(const NetworkInstance& instance, const CandidateRoute& route, int k) {
    if (k < 1) throw InvalidArgument("stage2_utility: bus count must be at least 1");
    const double wait = route.tau / k;
    return instance.half_headway ? -0.5 * wait : -wait;
}

double route_capacity(const CandidateRoute& route, int k, double gamma) {
    if (k < 1) throw InvalidArgument("route_capacity: bus count must be at least 1");
    return 60.0 * k / route.tau * gamma;
}

std::strong_ordering AllocationKey::operator<=>(const AllocationKey& other) const {
    if (auto c = routes.size() <=> other.routes.size(); c != 0) return c;
    for (std::size_t i = 0; i < routes.size(); ++i) {
        if (auto c = routes[i].route <=> other.routes[i].route; c != 0) return c;
    }
    for (std::size_t i = 0; i < routes.size(); ++i) {
        if (auto c = routes[i].buses <=> other.routes[i].buses; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

AllocationKey RouteDesign::key() const {
    AllocationKey k;
    for (const auto& r : routes) k.routes.push_back({r.route, r.buses});
    std::sort(k.routes.begin(), k.routes.end());
    return k;
}

std::string describe(const AllocationKey& key, const std::vector<CandidateRoute>& routes) {
    if (key.empty()) return "walk";
    std::string s;
    for (const auto& a : key.routes) {
        if (!s.empty()) s += " + ";
        s += routes.at(a.route).itinerary() + " x" + std::to_string(a.buses);
    }
    return s;
}

Network::Network(NetworkInstance instance) : instance_(std::move(instance)), routes_(enumerate_routes(instance_)) {}

RouteDesign solve_instance(const NetworkInstance& instance, const DemandVector& demand, const SolveOptions& options) {
    return Network(instance).solve(demand, options);
}

// ---- JSON ----

namespace {

json location_json(const Location& l) {
    return json{{"label", l.label}, {"x", l.x}, {"y", l.y}};
}

Location location_from_json(const json& j, int id, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    Location l;
    l.id = id;
    read_field(j, "label", l.label, path);
    l.x = require_field<double>(j, "x", path);
    l.y = require_field<double>(j, "y", path);
    return l;
}

}  // namespace

NetworkInstance parse_instance(const std::string& text, const std::string& source) {
    const json j = parse_json(text, source);
    const std::string root = "instance";
    if (!j.is_object()) throw ConfigError(root, "expected an object");
    NetworkInstance inst;
    for (const char* key : {"demand_nodes", "bus_stops"}) {
        const auto it = j.find(key);
        if (it == j.end() || !it->is_array()) throw ConfigError(root + "." + key, "expected an array");
        auto& target = std::string(key) == "demand_nodes" ? inst.demand_nodes : inst.bus_stops;
        for (std::size_t i = 0; i < it->size(); ++i) {
            target.push_back(location_from_json((*it)[i], static_cast<int>(i),
                                                root + "." + key + "[" + std::to_string(i) + "]"));
        }
    }
    inst.ride_time = require_field<std::vector<std::vector<double>>>(j, "ride_time", root);
    read_field(j, "walk_speed", inst.walk_speed, root);
    read_field(j, "fleet_size", inst.fleet_size, root);
    read_field(j, "capacity", inst.capacity, root);
    read_field(j, "max_routes", inst.max_routes, root);
    read_field(j, "max_route_stops", inst.max_route_stops, root);
    read_field(j, "dwell", inst.dwell, root);
    read_field(j, "half_headway", inst.half_headway, root);
    for (const auto& [key, value] : j.items()) {
        static const std::vector<std::string> known{"demand_nodes", "bus_stops",  "ride_time",
                                                    "walk_speed",   "fleet_size", "capacity",
                                                    "max_routes",   "max_route_stops", "dwell",
                                                    "half_headway"};
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(root + "." + key, "unknown field");
        }
    }
    try {
        inst.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(root, e.what());
    }
    return inst;
}

std::string instance_to_string(const NetworkInstance& instance) {
    json j;
    j["demand_nodes"] = json::array();
    for (const auto& l : instance.demand_nodes) j["demand_nodes"].push_back(location_json(l));
    j["bus_stops"] = json::array();
    for (const auto& l : instance.bus_stops) j["bus_stops"].push_back(location_json(l));
    j["ride_time"] = instance.ride_time;
    j["walk_speed"] = instance.walk_speed;
    j["fleet_size"] = instance.fleet_size;
    j["capacity"] = instance.capacity;
    j["max_routes"] = instance.max_routes;
    j["max_route_stops"] = instance.max_route_stops;
    j["dwell"] = instance.dwell;
    j["half_headway"] = instance.half_headway;
    return j.dump(2) + "\n";
}

NetworkInstance load_instance(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    return parse_instance(j.dump(), path.string());
}

void save_instance(const std::filesystem::path& path, const NetworkInstance& instance) {
    write_json_file(path, json::parse(instance_to_string(instance)));
}

std::string design_to_json(const Network& network, const RouteDesign& design) {
    const auto& inst = network.instance();
    const auto label = [&](int id) {
        const auto& l = inst.demand_nodes.at(id).label;
        return l.empty() ? std::to_string(id) : l;
    };
    json j;
    j["objective"] = design.objective;
    j["allocation"] = json::array();
    for (const auto& r : design.routes) {
        j["allocation"].push_back({{"route", r.route},
                                   {"itinerary", network.routes().at(r.route).itinerary()},
                                   {"buses", r.buses},
                                   {"flow", r.flow},
                                   {"capacity", r.capacity}});
    }
    j["flows"] = json::array();
    for (const auto& f : design.flows) {
        j["flows"].push_back({{"origin", label(f.pair.origin)},
                              {"destination", label(f.pair.destination)},
                              {"route", f.route < 0 ? json("walk") : json(network.routes().at(f.route).itinerary())},
                              {"flow", f.flow}});
    }
    j["summary"] = network.describe(design.key());
    return j.dump(2) + "\n";
}

}  // namespace drt
