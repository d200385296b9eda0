// Exact design solver: enumerate allocations, solve each fixed allocation as a
// min-cost transportation problem.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "drt/error.hpp"
#include "drt/network.hpp"

namespace drt {

namespace {

constexpr double kFlowEps = 1e-12;
constexpr double kCostEps = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Successive shortest paths over source -> pair -> route -> sink. Only
// pair/route links with positive per-passenger utility exist, so the flow
// stops as soon as no augmenting path has negative cost.
class Transport {
public:
    Transport(std::size_t n_pairs, std::size_t n_routes)
        : n_pairs_(n_pairs), n_routes_(n_routes), adj_(n_pairs + n_routes + 2) {}

    void supply(std::size_t p, double amount) { add_edge(source(), pair_node(p), amount, 0.0); }
    void capacity(std::size_t r, double amount) { add_edge(route_node(r), sink(), amount, 0.0); }
    void link(std::size_t p, std::size_t r, double utility) {
        link_edges_.push_back({p, r, edges_.size()});
        add_edge(pair_node(p), route_node(r), kInf, -utility);
    }

    void run() {
        const std::size_t n = adj_.size();
        std::vector<double> dist(n);
        std::vector<std::size_t> via(n);
        std::vector<bool> queued(n);
        std::vector<std::size_t> visits(n);
        for (;;) {
            std::fill(visits.begin(), visits.end(), 0);
            std::fill(dist.begin(), dist.end(), kInf);
            std::fill(queued.begin(), queued.end(), false);
            dist[source()] = 0.0;
            std::vector<std::size_t> queue{source()};
            // Bellman-Ford in queue form; the residual graph has no negative cycles.
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const std::size_t u = queue[head];
                queued[u] = false;
                if (++visits[u] > n) throw NumericError("transportation subproblem: negative residual cycle");
                for (std::size_t e : adj_[u]) {
                    const Edge& ed = edges_[e];
                    if (ed.cap <= kFlowEps) continue;
                    const double nd = dist[u] + ed.cost;
                    if (nd < dist[ed.to] - kCostEps) {
                        dist[ed.to] = nd;
                        via[ed.to] = e;
                        if (!queued[ed.to]) {
                            queued[ed.to] = true;
                            queue.push_back(ed.to);
                        }
                    }
                }
            }
            if (!(dist[sink()] < -kCostEps)) break;
            double push = kInf;
            for (std::size_t v = sink(); v != source(); v = edges_[via[v] ^ 1].to) {
                push = std::min(push, edges_[via[v]].cap);
            }
            for (std::size_t v = sink(); v != source(); v = edges_[via[v] ^ 1].to) {
                edges_[via[v]].cap -= push;
                edges_[via[v] ^ 1].cap += push;
            }
        }
    }

    // Flow on pair p -> route r.
    double flow(std::size_t p, std::size_t r) const {
        for (const auto& l : link_edges_) {
            if (l.pair == p && l.route == r) return edges_[l.edge ^ 1].cap;
        }
        return 0.0;
    }

private:
    struct Edge {
        std::size_t to;
        double cap;
        double cost;
    };
    struct Link {
        std::size_t pair, route, edge;
    };

    std::size_t source() const { return 0; }
    std::size_t sink() const { return n_pairs_ + n_routes_ + 1; }
    std::size_t pair_node(std::size_t p) const { return 1 + p; }
    std::size_t route_node(std::size_t r) const { return 1 + n_pairs_ + r; }

    void add_edge(std::size_t from, std::size_t to, double cap, double cost) {
        adj_[from].push_back(edges_.size());
        edges_.push_back({to, cap, cost});
        adj_[to].push_back(edges_.size());
        edges_.push_back({from, 0.0, -cost});
    }

    std::size_t n_pairs_, n_routes_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Edge> edges_;
    std::vector<Link> link_edges_;
};

void check_demand(const NetworkInstance& inst, const DemandVector& demand) {
    const int n = static_cast<int>(inst.demand_nodes.size());
    for (const auto& [pair, lambda] : demand) {
        if (pair.origin < 0 || pair.origin >= n || pair.destination < 0 || pair.destination >= n) {
            throw InvalidArgument("demand refers to a location outside the network (" + std::to_string(pair.origin) +
                                  "->" + std::to_string(pair.destination) + ")");
        }
        if (pair.origin == pair.destination) throw InvalidArgument("demand vector contains a self-pair");
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("demand must be finite and >= 0");
    }
}

// Per-solve data shared by all allocations.
struct Context {
    const Network& net;
    std::vector<ODPair> pairs;
    std::vector<double> lambda;
    std::vector<std::vector<double>> beta1;  // [route][pair]

    Context(const Network& n, const DemandVector& demand) : net(n) {
        check_demand(n.instance(), demand);
        for (const auto& [pair, l] : demand) {
            if (l > 0.0) {
                pairs.push_back(pair);
                lambda.push_back(l);
            }
        }
        beta1.resize(n.routes().size());
        for (const auto& r : n.routes()) {
            auto& row = beta1[r.id];
            row.reserve(pairs.size());
            for (const auto& p : pairs) row.push_back(stage1_utility(n.instance(), r, p));
        }
    }

    double beta2(int route, int k) const { return stage2_utility(net.instance(), net.routes()[route], k); }

    // Best stage-1 utility of any demanded pair on the route.
    double best_beta1(int route) const {
        double b = -kInf;
        for (double v : beta1[route]) b = std::max(b, v);
        return b;
    }

    RouteDesign evaluate(const std::vector<RouteAllocation>& alloc) const {
        const auto& inst = net.instance();
        Transport t(pairs.size(), alloc.size());
        for (std::size_t p = 0; p < pairs.size(); ++p) t.supply(p, lambda[p]);
        for (std::size_t r = 0; r < alloc.size(); ++r) {
            const auto& route = net.routes()[alloc[r].route];
            t.capacity(r, route_capacity(route, alloc[r].buses, inst.capacity));
            const double b2 = beta2(alloc[r].route, alloc[r].buses);
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                const double u = beta1[alloc[r].route][p] + b2;
                if (u > 0.0) t.link(p, r, u);
            }
        }
        t.run();

        RouteDesign d;
        for (const auto& a : alloc) {
            const auto& route = net.routes()[a.route];
            d.routes.push_back({a.route, a.buses, 0.0, route_capacity(route, a.buses, inst.capacity)});
        }
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            double riding = 0.0;
            for (std::size_t r = 0; r < alloc.size(); ++r) {
                const double x = t.flow(p, r);
                if (x <= 0.0) continue;
                d.flows.push_back({pairs[p], alloc[r].route, x});
                d.routes[r].flow += x;
                d.objective += beta1[alloc[r].route][p] * x;
                riding += x;
            }
            const double walk = std::max(0.0, lambda[p] - riding);
            if (walk > 0.0) d.flows.push_back({pairs[p], -1, walk});
        }
        for (const auto& r : d.routes) d.objective += beta2(r.route, r.buses) * r.flow;
        return d;
    }
};

bool flow_is_zero(double x) { return x <= 1e-9; }

double tie_tol(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

// Calls f(counts) for every vector of `m` positive counts with sum in
// [lo, hi], in lexicographic order.
template <class F>
void for_each_counts(std::size_t m, int lo, int hi, F&& f) {
    std::vector<int> counts(m, 1);
    auto rec = [&](auto&& self, std::size_t i, int used) -> void {
        if (i == m) {
            if (used >= lo && used <= hi) f(counts);
            return;
        }
        const int remaining_min = static_cast<int>(m - i - 1);
        for (int k = 1; used + k + remaining_min <= hi; ++k) {
            counts[i] = k;
            self(self, i + 1, used + k);
        }
    };
    rec(rec, 0, 0);
}

template <class F>
void for_each_subset(std::size_t n, std::size_t m, F&& f) {
    if (m > n) return;
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    for (;;) {
        f(idx);
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == n - m + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

RouteDesign Network::evaluate(const DemandVector& demand, const AllocationKey& allocation) const {
    std::vector<RouteAllocation> alloc = allocation.routes;
    std::sort(alloc.begin(), alloc.end());
    for (std::size_t i = 0; i < alloc.size(); ++i) {
        if (alloc[i].route < 0 || alloc[i].route >= static_cast<int>(routes_.size())) {
            throw InvalidArgument("allocation refers to an unknown route id " + std::to_string(alloc[i].route));
        }
        if (alloc[i].buses < 1) throw InvalidArgument("allocation bus counts must be at least 1");
        if (i > 0 && alloc[i].route == alloc[i - 1].route) {
            throw InvalidArgument("allocation lists a route twice");
        }
    }
    return Context(*this, demand).evaluate(alloc);
}

RouteDesign Network::solve(const DemandVector& demand, const SolveOptions& options) const {
    const Context ctx(*this, demand);
    const int K = instance_.fleet_size;
    const std::size_t nu = static_cast<std::size_t>(instance_.max_routes);
    if (routes_.empty()) throw InvalidArgument("candidate route set is empty");
    if (options.exact_nu && routes_.size() < nu) {
        throw InvalidArgument("fewer candidate routes than the required number of routes");
    }

    // In at-most mode, a route no demanded pair gains from even with the whole
    // fleet can only carry zero flow; leave it out.
    std::vector<int> pool;
    for (const auto& r : routes_) {
        if (options.exact_nu || ctx.best_beta1(r.id) + ctx.beta2(r.id, K) > 0.0) pool.push_back(r.id);
    }

    // Single-route optima bound every multi-route allocation from above.
    std::vector<std::vector<double>> single(routes_.size(), std::vector<double>(K + 1, 0.0));
    std::vector<double> single_max(routes_.size(), 0.0);
    for (int r : pool) {
        if (ctx.best_beta1(r) + ctx.beta2(r, K) <= 0.0) continue;
        for (int k = 1; k <= K; ++k) {
            single[r][k] = ctx.evaluate({{r, k}}).objective;
            single_max[r] = std::max(single_max[r], single[r][k]);
        }
    }

    std::optional<RouteDesign> best;
    AllocationKey best_key;
    if (!options.exact_nu) {
        best = ctx.evaluate({});
    }
    const auto consider = [&](RouteDesign d) {
        if (!options.exact_nu &&
            std::any_of(d.routes.begin(), d.routes.end(), [](const RouteUsage& r) { return flow_is_zero(r.flow); })) {
            // Idle routes are not part of the design; re-solve without them.
            std::vector<RouteAllocation> kept;
            for (const auto& r : d.routes) {
                if (!flow_is_zero(r.flow)) kept.push_back({r.route, r.buses});
            }
            d = ctx.evaluate(kept);
        }
        AllocationKey key = d.key();
        if (!best) {
            best = std::move(d);
            best_key = std::move(key);
            return;
        }
        const double tol = tie_tol(best->objective);
        if (d.objective > best->objective + tol || (d.objective >= best->objective - tol && key < best_key)) {
            best = std::move(d);
            best_key = std::move(key);
        }
    };
    const auto prunable = [&](double bound) { return best && bound < best->objective - tie_tol(best->objective); };

    std::vector<RouteAllocation> alloc;
    for (std::size_t m = options.exact_nu ? nu : 1; m <= nu; ++m) {
        const int lo = options.exact_nu ? static_cast<int>(m) : K;
        for_each_subset(pool.size(), m, [&](const std::vector<std::size_t>& idx) {
            double subset_bound = 0.0;
            for (std::size_t i : idx) subset_bound += single_max[pool[i]];
            if (prunable(subset_bound)) return;
            for_each_counts(m, lo, K, [&](const std::vector<int>& counts) {
                double bound = 0.0;
                alloc.clear();
                for (std::size_t i = 0; i < m; ++i) {
                    alloc.push_back({pool[idx[i]], counts[i]});
                    bound += single[pool[idx[i]]][counts[i]];
                }
                if (prunable(bound)) return;
                consider(ctx.evaluate(alloc));
            });
        });
    }
    return std::move(*best);
}

std::vector<std::string> check_design(const Network& network, const DemandVector& demand, const RouteDesign& design,
                                      const SolveOptions& options, double tol) {
    const auto& inst = network.instance();
    std::vector<std::string> issues;
    const auto report = [&](const std::string& s) { issues.push_back(s); };
    const auto close = [&](double a, double b) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); };

    int buses = 0;
    std::map<int, const RouteUsage*> used;
    for (const auto& r : design.routes) {
        if (r.route < 0 || r.route >= static_cast<int>(network.routes().size())) {
            report("unknown route id " + std::to_string(r.route));
            continue;
        }
        if (!used.emplace(r.route, &r).second) report("route " + std::to_string(r.route) + " has two bus counts");
        if (r.buses < 1 || r.buses > inst.fleet_size) report("route " + std::to_string(r.route) + " bus count out of range");
        buses += r.buses;
        const double cap = route_capacity(network.routes()[r.route], std::max(1, r.buses), inst.capacity);
        if (!close(r.capacity, cap)) report("route " + std::to_string(r.route) + " capacity mismatch");
        if (r.flow > cap + tol * std::max(1.0, cap)) report("route " + std::to_string(r.route) + " over capacity");
        if (r.flow < -tol) report("route " + std::to_string(r.route) + " negative flow");
    }
    if (buses > inst.fleet_size) report("fleet size exceeded");
    const std::size_t n_routes = design.routes.size();
    if (options.exact_nu ? n_routes != static_cast<std::size_t>(inst.max_routes)
                         : n_routes > static_cast<std::size_t>(inst.max_routes)) {
        report("route count " + std::to_string(n_routes) + " violates the limit");
    }

    std::map<int, double> inflow;
    std::map<ODPair, double> served;
    double objective = 0.0;
    for (const auto& f : design.flows) {
        if (f.flow < -tol) report("negative stage-1 flow");
        served[f.pair] += f.flow;
        if (!demand.contains(f.pair)) report("flow for a pair without demand");
        if (f.route < 0) continue;
        const auto it = used.find(f.route);
        if (it == used.end()) {
            report("flow on unallocated route " + std::to_string(f.route));
            continue;
        }
        inflow[f.route] += f.flow;
        objective += stage1_utility(inst, network.routes()[f.route], f.pair) * f.flow;
    }
    for (const auto& [pair, lambda] : demand) {
        if (!close(served[pair], lambda)) report("demand not conserved for a pair");
    }
    for (const auto& [id, r] : used) {
        if (!close(inflow[id], r->flow)) report("flow balance broken on route " + std::to_string(id));
        if (r->buses >= 1) objective += stage2_utility(inst, network.routes()[id], r->buses) * r->flow;
    }
    if (!close(design.objective, objective)) report("objective does not match the flows");
    return issues;
}

}  // namespace drt
