// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-drtopt>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "drt/commands.hpp"
#include "drt/copula.hpp"
#include "drt/gboost.hpp"
#include "drt/hp.hpp"
#include "drt/log.hpp"
#include "drt/lqr.hpp"
#include "drt/metrics.hpp"
#include "drt/network.hpp"
#include "drt/pipeline.hpp"
#include "drt/synthetic.hpp"
#include "instances.hpp"
#include "oracle.hpp"
#include "scenarios.hpp"
#include "temp_dir.hpp"

using namespace drt;
namespace fs = std::filesystem;

namespace {

// Collects failed checks of one criterion; the first few are printed.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        ++total_;
        if (ok) return;
        if (failures_.size() < 5) failures_.push_back(what);
        ++failed_;
    }
    void note(const std::string& s) { notes_.push_back(s); }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::ostringstream s;
        s << total_ - failed_ << "/" << total_ << " checks";
        for (const auto& n : notes_) s << "; " << n;
        for (const auto& f : failures_) s << "\n      failed: " << f;
        if (failed_ > failures_.size()) s << "\n      ... " << failed_ - failures_.size() << " more";
        return s.str();
    }

private:
    std::size_t total_ = 0;
    std::size_t failed_ = 0;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------- 1

// Any minimizer of the mean tilted loss; unique when q*n is not an integer.
double order_statistic_quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
    return v[k - 1];
}

double linear_percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

void quantile_recovery(Check& c) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int rep = 0; rep < 5; ++rep) {
        // LQR on an intercept column
        const int n_lqr = 201 + 2 * rep;
        std::vector<double> sample(n_lqr);
        for (auto& v : sample) v = u(rng);
        const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n_lqr, 1);
        const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(sample.data(), n_lqr);
        for (double q : QuantileSet::standard()) {
            const double expect = order_statistic_quantile(sample, q);
            const auto fit = fit_quantile_regression(ones, y, q);
            c.expect(std::abs(fit.beta[0] - expect) <= 1e-3,
                     "LQR q=" + num(q) + " got " + num(fit.beta[0]) + " want " + num(expect));
        }

        // GBoost with a constant feature: no split is possible
        const int n_gb = 1000;
        std::vector<double> gsample(n_gb);
        for (auto& v : gsample) v = u(rng);
        const Eigen::MatrixXd X = Eigen::MatrixXd::Constant(n_gb, 1, 1.0);
        const Eigen::VectorXd gy = Eigen::Map<const Eigen::VectorXd>(gsample.data(), n_gb);
        GBoostParams p;
        p.seed = static_cast<std::uint64_t>(rep);
        const std::vector<double> row{1.0};
        for (double q : QuantileSet::standard()) {
            const double expect = linear_percentile(gsample, q);
            for (GBoostInit init : {GBoostInit::Quantile, GBoostInit::Zero}) {
                p.init = init;
                p.n_trees = init == GBoostInit::Zero ? 200 : 100;
                const double got = fit_gboost(X, gy, q, p).predict(row);
                c.expect(std::abs(got - expect) <= 0.5,
                         "GBoost q=" + num(q) + " got " + num(got) + " want " + num(expect));
            }
        }
    }
}

// ---------------------------------------------------------------- 2

QuantileForecast qf(ODPair pair, HourStamp t, std::vector<double> values) {
    return scenarios::forecast(pair, t, std::move(values));
}

void metric_identities(Check& c) {
    // lag i: forecasts i..i+4; truth inside the band on even lags, i+10 on odd
    const ODPair pair{0, 1};
    const HourStamp t0 = HourStamp::from(Date{2018, 1, 8}, 8);
    std::vector<QuantileForecast> sorted, crossed;
    Series truth;
    truth.pair = pair;
    for (int i = 0; i < 10; ++i) {
        const double b = i;
        sorted.push_back(qf(pair, t0 + i, {b, b + 1, b + 2, b + 3, b + 4}));
        crossed.push_back(qf(pair, t0 + i, {b + 1, b, b + 2, b + 4, b + 3}));
        truth.push_back(t0 + i, i % 2 == 0 ? b + 2 : b + 10);
    }
    // per-level losses: even lags 0.1 + 0.25 + 0 + 0.25 + 0.1 = 0.7,
    // odd lags 0.5 + 2.25 + 4 + 5.25 + 5.7 = 17.7; MTL = (5*0.7 + 5*17.7)/10
    c.expect(std::abs(mtl(sorted, truth) - 9.2) <= 1e-12, "MTL " + num(mtl(sorted, truth)) + " != 9.2");
    c.expect(icp(sorted, truth) == 0.5, "ICP " + num(icp(sorted, truth)) + " != 0.5");
    c.expect(mil(sorted) == 4.0, "MIL " + num(mil(sorted)) + " != 4");
    c.expect(crossings(sorted) == 0, "#cross of the sorted fixture");
    c.expect(crossings(crossed) == 20, "#cross " + std::to_string(crossings(crossed)) + " != 20");
    // crossed band is [b+1, b+3]: even truths b+2 still inside, width 2
    c.expect(icp(crossed, truth) == 0.5, "ICP of the crossed fixture " + num(icp(crossed, truth)));
    c.expect(mil(crossed) == 2.0, "MIL of the crossed fixture " + num(mil(crossed)));

    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(-20.0, 80.0);
    long total = 0;
    for (int f = 0; f < 100; ++f) {
        std::vector<QuantileForecast> fs_;
        for (int i = 0; i < 10; ++i) {
            std::vector<double> v(5);
            for (auto& x : v) x = u(rng);
            postprocess_quantiles(v, true);
            fs_.push_back(qf(pair, t0 + i, v));
        }
        total += crossings(fs_);
    }
    c.expect(total == 0, "random sorted fixtures produced " + std::to_string(total) + " crossings");
}

// ---------------------------------------------------------------- 3

SyntheticSpec equicorrelated(double rho, std::uint64_t seed) {
    SyntheticSpec s;
    s.n_locations = 3;
    s.dates = {Date{2018, 1, 1}, Date{2018, 3, 24}};  // 84 days = 2016 lags
    s.tod_profile.assign(24, 1.0);
    s.dow_profile.assign(7, 1.0);
    s.exam_multiplier = 1.0;
    s.pair_scales.assign(6, 1.0);
    s.base_rate = 400.0;
    s.dispersion = 1.0;
    s.rho = rho;
    s.seed = seed;
    return s;
}

std::vector<double> mid_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && v[idx[j]] == v[idx[i]]) ++j;
        for (std::size_t k = i; k < j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j - 1);
        i = j;
    }
    return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
    ma /= n, mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson(mid_ranks(a), mid_ranks(b));
}

// sup |F_n - F|, checked on both sides of every observed value so atoms of F
// are handled.
double ks_distance(std::vector<double> sample, const EmpiricalCDF& F) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size();) {
        std::size_t j = i;
        while (j < sample.size() && sample[j] == sample[i]) ++j;
        const double x = sample[i];
        const double below = F.cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
        d = std::max({d, std::abs(F.cdf(x) - static_cast<double>(j) / n), std::abs(below - static_cast<double>(i) / n)});
        i = j;
    }
    return d;
}

void copula_fidelity(Check& c) {
    const std::vector<std::vector<double>> marginals{{10, 20, 30, 45, 70}, {0, 3, 8, 15, 30},   {100, 110, 120, 130, 140},
                                                     {5, 5, 9, 20, 21},    {40, 41, 60, 80, 200}, {1, 2, 3, 4, 5}};
    double worst_rho = 0, worst_ks = 0, worst_rank = 0;
    for (double rho : {0.0, 0.5, 0.9}) {
        const CountTable data = generate_synthetic(equicorrelated(rho, 303));
        std::map<ODPair, Series> history;
        for (const auto& [p, s] : data.series) history[p] = to_series(s);
        const auto cop = GaussianCopula::fit(history);
        const auto& R = cop.correlation();
        for (Eigen::Index i = 0; i < R.rows(); ++i)
            for (Eigen::Index j = 0; j < i; ++j) {
                worst_rho = std::max(worst_rho, std::abs(R(i, j) - rho));
                c.expect(std::abs(R(i, j) - rho) <= 0.1, "rho=" + num(rho) + " fitted " + num(R(i, j)));
            }

        LagForecast forecasts;
        const auto& order = cop.pair_order();
        const HourStamp t = HourStamp::from(Date{2018, 3, 25}, 9);
        for (std::size_t i = 0; i < order.size(); ++i) forecasts[order[i]] = qf(order[i], t, marginals[i]);
        const auto draws = cop.sample(forecasts, 10000, 404 + static_cast<std::uint64_t>(rho * 10), 2);

        std::vector<std::vector<double>> cols(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (Eigen::Index r = 0; r < draws.values.rows(); ++r) cols[i].push_back(draws.values(r, Eigen::Index(i)));
            const double ks = ks_distance(cols[i], EmpiricalCDF::from_forecast(forecasts.at(order[i])));
            worst_ks = std::max(worst_ks, ks);
            c.expect(ks <= 0.03, "rho=" + num(rho) + " KS " + num(ks));
        }
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const double target = spearman(history.at(order[i]).values, history.at(order[j]).values);
                const double got = spearman(cols[i], cols[j]);
                worst_rank = std::max(worst_rank, std::abs(got - target));
                c.expect(std::abs(got - target) <= 0.05,
                         "rho=" + num(rho) + " rank corr " + num(got) + " vs data " + num(target));
            }
        }
    }
    c.note("max |rho err| " + num(worst_rho) + ", max KS " + num(worst_ks) + ", max rank err " + num(worst_rank));
}

// ---------------------------------------------------------------- 4

void solver_exactness(Check& c) {
    std::mt19937_64 rng(404);
    double worst = 0.0;
    for (int t = 0; t < 250; ++t) {
        const auto inst = instances::tiny_instance(rng);
        const auto dem = instances::tiny_demand(rng, inst);
        const auto d = solve_instance(inst, dem);
        const auto o = oracle::solve(inst, dem);
        worst = std::max(worst, std::abs(d.objective - o.objective));
        c.expect(std::abs(d.objective - o.objective) <= 1e-9,
                 "tiny #" + std::to_string(t) + ": " + num(d.objective) + " vs oracle " + num(o.objective));
    }
    std::size_t issues = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto inst = instances::medium_instance(rng);
        const auto dem = instances::medium_demand(rng, inst);
        const Network net(inst);
        const auto problems = check_design(net, dem, net.solve(dem), {}, 1e-9);
        issues += problems.size();
        c.expect(problems.empty(), "medium #" + std::to_string(t) + ": " + (problems.empty() ? "" : problems[0]));
    }
    c.note("250 tiny (max gap " + num(worst) + "), 1000 medium");
}

// ---------------------------------------------------------------- 5

void algorithm_consistency(Check& c) {
    std::mt19937_64 rng(505);
    const HourStamp lag = HourStamp::from(Date{2018, 1, 9}, 10);
    // draw until 50 instances whose ground truth operates a route; the walking
    // ones drawn on the way must agree as well
    int operating = 0, walking = 0;
    for (int t = 0; operating < 50 && t < 1000; ++t) {
        const auto inst = instances::medium_instance(rng);
        const Network net(inst);
        const int n = static_cast<int>(inst.demand_nodes.size());
        CountTable truth;
        ForecastTable exact;
        std::vector<ODPair> pairs;
        std::uniform_int_distribution<int> count(0, 60);
        for (int i = 0; i < n; ++i) truth.labels.push_back("L" + std::to_string(i));
        for (int o = 0; o < n; ++o)
            for (int d = 0; d < n; ++d) {
                if (o == d) continue;
                const ODPair p{o, d};
                const int y = count(rng);
                truth.series[p].pair = p;
                truth.series[p].observations.push_back({lag, y});
                exact[p].push_back(qf(p, lag, std::vector<double>(5, double(y))));
                pairs.push_back(p);
            }
        const auto cop = GaussianCopula::from_correlation(pairs, Eigen::MatrixXd::Identity(Eigen::Index(pairs.size()),
                                                                                           Eigen::Index(pairs.size())));
        CompareOptions opt;
        opt.samples = 25;
        opt.seed = static_cast<std::uint64_t>(t);
        const auto rows = compare_strategies({lag}, {{"exact", exact}}, truth, cop, net, opt);
        const auto& r = rows.at(0);
        c.expect(r.proposed_match() && r.median_match() && r.robust_match(),
                 "instance " + std::to_string(t) + ": P/M/R differ from GT");
        c.expect(r.proposed.histogram.size() == 1 && r.proposed.chosen_count() == 25,
                 "instance " + std::to_string(t) + ": point mass gave a split histogram");
        (r.ground_truth.routes.empty() ? walking : operating) += 1;
    }
    c.expect(operating == 50, "only " + std::to_string(operating) + " instances with an operating GT design");
    c.note(std::to_string(operating) + " instances with routes (+" + std::to_string(walking) + " walking)");

    // capacity cliff: median below the first boundary, 95% level above it
    const auto inst = scenarios::capacity_cliff();
    const Network net(inst);
    const auto cop = GaussianCopula::from_correlation({{0, 1}}, Eigen::MatrixXd::Identity(1, 1));
    const LagForecast f{{{0, 1}, qf({0, 1}, lag, scenarios::dispersed_cliff_values())}};
    const auto p = optimize_lag(cop, f, net, 100, 55);
    const auto m = optimize_point(f, 0.50, net);
    const auto r = optimize_point(f, 0.95, net);
    const auto om = oracle::solve(inst, {{{0, 1}, f.at({0, 1}).at(0.50)}});
    const auto orr = oracle::solve(inst, {{{0, 1}, f.at({0, 1}).at(0.95)}});
    c.expect(m.key() == om.key && std::abs(m.objective - om.objective) <= 1e-9, "M disagrees with the oracle");
    c.expect(r.key() == orr.key && std::abs(r.objective - orr.objective) <= 1e-9, "R disagrees with the oracle");
    c.expect(m.key().routes.size() == 1, "M operates " + std::to_string(m.key().routes.size()) + " routes");
    c.expect(r.key().routes.size() == 2, "R operates " + std::to_string(r.key().routes.size()) + " routes");
    c.expect(p.chosen_key().routes.size() == 2, "P operates " + std::to_string(p.chosen_key().routes.size()) + " routes");
    c.note("cliff: M = " + net.describe(m.key()) + ", R = " + net.describe(r.key()) + ", P = " +
           net.describe(p.chosen_key()) + " (" + std::to_string(p.chosen_count()) + "/100)");
}

// ---------------------------------------------------------------- 6

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
    }
    return out;
}

int sh(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return rc;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

void end_to_end_determinism(Check& c, const std::string& drtopt) {
    if (drtopt.empty() || !fs::is_regular_file(drtopt)) {
        c.expect(false, "drtopt binary not given or missing: '" + drtopt + "'");
        return;
    }
    testing::TempDir tmp;
    std::vector<std::map<std::string, std::string>> runs;
    const std::vector<int> threads{1, 1, 8};
    for (std::size_t i = 0; i < threads.size(); ++i) {
        const fs::path dir = tmp.path() / ("run" + std::to_string(i));
        const std::string bin = quote(drtopt) + " --log-level warn ";
        int rc = sh(bin + "synth --out " + quote(dir) + " --seed 2024");
        c.expect(rc == 0, "synth exited with " + std::to_string(rc));
        if (rc != 0) return;
        // add a boosted model so parallel tuning is exercised too
        auto cfg = nlohmann::json::parse(slurp(dir / "config.json"));
        cfg["models"].push_back({{"preset", "GBoost"},
                                 {"name", "GBoost-small"},
                                 {"grid", {{"learning_rates", {0.1, 0.3}}, {"max_depths", {2}}, {"n_trees", {30}}}}});
        std::ofstream(dir / "config.json") << cfg.dump(2);
        const std::string common = " --config " + quote(dir / "config.json");
        const std::string t = "--threads " + std::to_string(threads[i]) + " ";
        rc = sh(bin + t + "train" + common);
        c.expect(rc == 0, "train exited with " + std::to_string(rc));
        rc = sh(bin + t + "pipeline" + common);
        c.expect(rc == 0, "pipeline exited with " + std::to_string(rc));
        if (rc != 0) return;
        runs.push_back(tree(dir));
    }
    c.expect(runs[0].size() >= 15, "only " + std::to_string(runs[0].size()) + " files produced");
    for (std::size_t i = 1; i < runs.size(); ++i) {
        c.expect(runs[i].size() == runs[0].size(), "run " + std::to_string(i) + " produced a different file set");
        for (const auto& [name, content] : runs[0]) {
            const auto it = runs[i].find(name);
            c.expect(it != runs[i].end() && it->second == content,
                     name + " differs between run 0 and run " + std::to_string(i) + " (threads " +
                         std::to_string(threads[i]) + ")");
        }
    }
    c.note(std::to_string(runs[0].size()) + " files compared across 3 runs (threads 1, 1, 8)");
}

// ---------------------------------------------------------------- 7

struct HourCase {
    int hour;
    double mean;
};

void hour_boundaries(Check& c) {
    // the fixture's boundaries, confirmed by the oracle
    const auto inst = scenarios::capacity_cliff();
    const Network net(inst);
    for (double lam : {42.0, 43.0, 78.0, 79.0}) {
        const auto o = oracle::solve(inst, {{{0, 1}, lam}});
        const auto expect = lam < scenarios::kCliffLow    ? scenarios::route_a_twice()
                            : lam < scenarios::kCliffHigh ? scenarios::routes_a_and_b()
                                                          : AllocationKey{{{5, 2}}};
        c.expect(o.key == expect, "oracle boundary check at " + num(lam));
    }
    const std::vector<double> boundaries{scenarios::kCliffLow, scenarios::kCliffHigh};

    // Hour-dependent demand L1 -> L2 only; L2 -> L1 is always zero.
    const std::vector<HourCase> hours{{8, 20},  {9, 42.5}, {10, 200}, {11, 78.5}, {12, 0},  {13, 20},
                                      {14, 200}, {15, 43},  {16, 78},  {17, 10},   {18, 250}};
    SyntheticSpec spec;
    spec.n_locations = 2;
    spec.dates = {Date{2017, 1, 2}, Date{2017, 12, 31}};
    spec.tod_profile.assign(24, 0.0);
    for (const auto& h : hours) spec.tod_profile[static_cast<std::size_t>(h.hour)] = h.mean;
    spec.tod_profile[7] = 20;
    for (int h = 19; h <= 22; ++h) spec.tod_profile[static_cast<std::size_t>(h)] = 20;
    spec.dow_profile.assign(7, 1.0);
    spec.exam_multiplier = 1.0;
    spec.base_rate = 1.0;
    spec.pair_scales = {1.0, 0.0};
    spec.rho = 0.0;
    spec.dispersion = 1.0;
    spec.seed = 707;
    const CountTable data = generate_synthetic(spec);

    SplitSpec split;
    split.train = {Date{2017, 1, 2}, Date{2017, 12, 24}};
    split.test = {Date{2017, 12, 25}, Date{2017, 12, 31}};
    check_network_labels(net, data.labels);

    const auto model = train_model(ModelSpec::preset("HP"), data, split, QuantileSet::standard());
    const auto table = forecast(model, data, split.test);
    const auto copula = fit_count_copula(data, split, 30);

    int far = 0, far_ok = 0, near = 0, near_split = 0;
    std::ostringstream counts;
    for (const auto& h : hours) {
        const HourStamp lag = HourStamp::from(Date{2017, 12, 27}, h.hour);
        const auto res = optimize_lag(copula, forecasts_at(table, lag), net, 100, lag_seed(808, lag));
        const double sd = spec.dispersion * std::sqrt(h.mean);
        double gap = 1e300;
        for (double b : boundaries) gap = std::min(gap, std::abs(h.mean - b));
        const std::size_t top = res.chosen_count();
        counts << " " << h.hour << "h:" << top;
        if (h.mean == 0.0 || gap >= 3.0 * sd) {
            ++far;
            far_ok += top > 90 ? 1 : 0;
            c.expect(top > 90, "far hour " + std::to_string(h.hour) + " (mean " + num(h.mean) + ") modal count " +
                                   std::to_string(top));
        } else if (gap <= 0.5 * sd) {
            ++near;
            const bool split_hist = res.histogram.size() >= 2 && top <= 90;
            near_split += split_hist ? 1 : 0;
            c.expect(split_hist, "near hour " + std::to_string(h.hour) + " (mean " + num(h.mean) + ") modal count " +
                                     std::to_string(top) + " of " + std::to_string(res.histogram.size()) + " designs");
        }
    }
    c.expect(far >= 6 && near >= 4, "fixture lacks far/near hours");
    c.note("far hours >90: " + std::to_string(far_ok) + "/" + std::to_string(far) + ", near hours split: " +
           std::to_string(near_split) + "/" + std::to_string(near) + "; modal counts" + counts.str());
}

// ---------------------------------------------------------------- 8

void enumeration_counts(Check& c) {
    const auto line = [](int n_stops, int max_stops) {
        NetworkInstance inst;
        inst.demand_nodes = {{0, "A", 0, 0}, {1, "B", 1000, 0}};
        for (int i = 0; i < n_stops; ++i) inst.bus_stops.push_back({i, "", double(100 * i), 0});
        inst.ride_time.assign(std::size_t(n_stops), std::vector<double>(std::size_t(n_stops), 1.0));
        inst.max_route_stops = max_stops;
        inst.max_routes = 1;
        inst.fleet_size = 1;
        return inst;
    };
    const NetworkInstance five = line(5, 5);
    const auto r5 = enumerate_routes(five);
    c.expect(r5.size() == 89, "5 stops, L=5: " + std::to_string(r5.size()));
    c.expect(count_routes(5, 5) == 89, "count_routes(5, 5)");

    const NetworkInstance two = line(2, 2);
    const auto r2 = enumerate_routes(two);
    c.expect(r2.size() == 3, "2 stops, L=2: " + std::to_string(r2.size()));
    c.expect(count_routes(2, 2) == 3, "count_routes(2, 2)");

    // no two candidates are rotations of each other
    std::set<std::vector<int>> seen;
    for (const auto& r : r5) {
        auto s = r.stops;
        std::vector<int> best = s;
        for (std::size_t k = 0; k < s.size(); ++k) {
            std::rotate(s.begin(), s.begin() + 1, s.end());
            best = std::min(best, s);
        }
        c.expect(seen.insert(best).second, "duplicate rotation class " + r.itinerary());
    }
}

}  // namespace

int main(int argc, char** argv) {
    set_log_level("warn");
    const std::string drtopt = argc > 1 ? argv[1] : "";

    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "quantile recovery (LQR, GBoost)", 30, quantile_recovery},
        {2, "metric identities", 0, metric_identities},
        {3, "copula fidelity", 60, copula_fidelity},
        {4, "solver exactness", 300, solver_exactness},
        {5, "sample-and-solve consistency", 120, algorithm_consistency},
        {6, "end-to-end determinism", 0, [&](Check& c) { end_to_end_determinism(c, drtopt); }},
        {7, "hour-dependent confidence", 300, hour_boundaries},
        {8, "candidate enumeration count", 0, enumeration_counts},
    };

    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (cr.limit_s > 0) c.expect(secs < cr.limit_s, "runtime " + num(secs) + " s over " + num(cr.limit_s) + " s");
        std::printf("%s criterion %d: %s [%.2f s] %s\n", c.ok() ? "PASS" : "FAIL", cr.id, cr.name, secs,
                    c.summary().c_str());
        std::fflush(stdout);
        failed += c.ok() ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
