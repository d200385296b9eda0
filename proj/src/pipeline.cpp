#include "drt/pipeline.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "drt/error.hpp"
#include "drt/parallel.hpp"

namespace drt {

LagForecast forecasts_at(const ForecastTable& table, HourStamp lag) {
    LagForecast out;
    for (const auto& [pair, list] : table) {
        const auto it = std::lower_bound(list.begin(), list.end(), lag,
                                         [](const QuantileForecast& f, HourStamp t) { return f.stamp < t; });
        if (it == list.end() || it->stamp != lag) {
            throw DataError("no forecast for pair " + std::to_string(pair.origin) + "->" +
                            std::to_string(pair.destination) + " at " + lag.str());
        }
        out.emplace(pair, *it);
    }
    return out;
}

std::uint64_t lag_seed(std::uint64_t seed, HourStamp lag) {
    return sample_seed(seed ^ 0x6c61675f73656564ULL, static_cast<std::uint64_t>(lag.hours()));
}

ScenarioResult optimize_lag(const GaussianCopula& copula, const LagForecast& forecasts, const Network& network,
                            std::size_t k, std::uint64_t seed, const SolveOptions& options, unsigned threads) {
    if (k < 1) throw InvalidArgument("optimize_lag: need at least one sample");
    if (forecasts.empty()) throw InvalidArgument("optimize_lag: no forecasts");
    const DemandSamples draws = copula.sample(forecasts, k, seed, threads);
    const auto& order = draws.order;
    const auto demand_of = [&](std::size_t i) {
        DemandVector d;
        for (std::size_t j = 0; j < order.size(); ++j) d[order[j]] = draws.values(i, j);
        return d;
    };

    std::vector<RouteDesign> designs(k);
    parallel_for(k, threads, [&](std::size_t i) { designs[i] = network.solve(demand_of(i), options); });

    ScenarioResult res;
    res.lag = forecasts.begin()->second.stamp;
    std::map<AllocationKey, KeyCount> counts;
    for (const auto& d : designs) {
        SampleSolution s{d.key(), d.objective};
        auto& c = counts[s.key];
        c.key = s.key;
        ++c.count;
        c.mean_objective += d.objective;
        res.mean_time_savings += d.objective;
        res.samples.push_back(std::move(s));
    }
    res.mean_time_savings /= static_cast<double>(k);
    for (auto& [key, c] : counts) {
        c.mean_objective /= static_cast<double>(c.count);
        res.histogram.push_back(c);
    }
    std::sort(res.histogram.begin(), res.histogram.end(), [](const KeyCount& a, const KeyCount& b) {
        if (a.count != b.count) return a.count > b.count;
        if (a.mean_objective != b.mean_objective) return a.mean_objective > b.mean_objective;
        return a.key < b.key;
    });

    const AllocationKey& mode = res.histogram.front().key;
    for (std::size_t i = 0; i < k; ++i) {
        if (res.samples[i].key == mode) {
            res.chosen = designs[i];
            break;
        }
    }
    std::vector<double> fixed(k);
    parallel_for(k, threads, [&](std::size_t i) { fixed[i] = network.evaluate(demand_of(i), mode).objective; });
    for (double v : fixed) res.chosen_expected += v;
    res.chosen_expected /= static_cast<double>(k);
    return res;
}

RouteDesign optimize_point(const LagForecast& forecasts, double q, const Network& network,
                           const SolveOptions& options) {
    DemandVector d;
    for (const auto& [pair, f] : forecasts) d[pair] = std::max(0.0, f.at(q));
    return network.solve(d, options);
}

RouteDesign optimize_ground_truth(const CountTable& truth, HourStamp lag, const std::vector<ODPair>& pairs,
                                  const Network& network, const SolveOptions& options) {
    DemandVector d;
    for (const auto& pair : pairs) {
        const auto* c = truth.count_at(pair, lag);
        if (!c) throw DataError("no observed count for " + truth.pair_label(pair) + " at " + lag.str());
        d[pair] = static_cast<double>(*c);
    }
    return network.solve(d, options);
}

void check_network_labels(const Network& network, const std::vector<std::string>& labels) {
    const auto& nodes = network.instance().demand_nodes;
    if (nodes.size() < labels.size()) {
        throw DataError("network has " + std::to_string(nodes.size()) + " demand nodes but the data has " +
                        std::to_string(labels.size()) + " locations");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!nodes[i].label.empty() && nodes[i].label != labels[i]) {
            throw DataError("demand node " + std::to_string(i) + " is labeled '" + nodes[i].label +
                            "' but the data calls location " + std::to_string(i) + " '" + labels[i] + "'");
        }
    }
}

namespace {

double lag_mtl(const LagForecast& forecasts, const CountTable& truth, HourStamp lag) {
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& [pair, f] : forecasts) {
        const auto* c = truth.count_at(pair, lag);
        if (!c) throw DataError("no observed count for " + truth.pair_label(pair) + " at " + lag.str());
        for (std::size_t i = 0; i < f.levels.size(); ++i) {
            total += tilted_loss(f.levels[i], static_cast<double>(*c), f.values[i]);
            ++n;
        }
    }
    return n ? total / static_cast<double>(n) : 0.0;
}

}  // namespace

std::vector<ComparisonRow> compare_strategies(const std::vector<HourStamp>& lags,
                                              const std::vector<NamedForecasts>& models, const CountTable& truth,
                                              const GaussianCopula& copula, const Network& network,
                                              const CompareOptions& options) {
    std::vector<ComparisonRow> rows;
    for (HourStamp lag : lags) {
        const RouteDesign gt = optimize_ground_truth(truth, lag, copula.pair_order(), network, options.solve);
        for (const auto& m : models) {
            const LagForecast f = forecasts_at(m.table, lag);
            ComparisonRow row;
            row.lag = lag;
            row.model = m.model;
            row.ground_truth = gt;
            row.proposed = optimize_lag(copula, f, network, options.samples, lag_seed(options.seed, lag),
                                        options.solve, options.threads);
            row.median = optimize_point(f, options.median_level, network, options.solve);
            row.robust = optimize_point(f, options.robust_level, network, options.solve);
            row.hourly_mtl = lag_mtl(f, truth, lag);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows, const Network& network) {
    out << "timestamp,model,gt,gt_objective,p,p_count,p_mean_objective,p_chosen_expected,m,m_objective,r,"
           "r_objective,p_match,m_match,r_match\n";
    for (const auto& r : rows) {
        out << r.lag.str() << ',' << r.model << ',' << network.describe(r.ground_truth.key()) << ','
            << format_double(r.ground_truth.objective) << ',' << network.describe(r.proposed.chosen_key()) << ','
            << r.proposed.chosen_count() << ',' << format_double(r.proposed.mean_time_savings) << ','
            << format_double(r.proposed.chosen_expected) << ',' << network.describe(r.median.key()) << ','
            << format_double(r.median.objective) << ',' << network.describe(r.robust.key()) << ','
            << format_double(r.robust.objective) << ',' << int(r.proposed_match()) << ',' << int(r.median_match())
            << ',' << int(r.robust_match()) << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const std::vector<ComparisonRow>& rows, const Network& network) {
    out << "timestamp,model,rank,allocation,count,mean_objective,is_gt\n";
    for (const auto& r : rows) {
        const AllocationKey gt = r.ground_truth.key();
        for (std::size_t i = 0; i < r.proposed.histogram.size(); ++i) {
            const auto& h = r.proposed.histogram[i];
            out << r.lag.str() << ',' << r.model << ',' << i + 1 << ',' << network.describe(h.key) << ',' << h.count
                << ',' << format_double(h.mean_objective) << ',' << int(h.key == gt) << '\n';
        }
    }
}

void write_savings_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "timestamp,model,hourly_mtl,mean_time_savings,chosen_expected,gt_objective\n";
    for (const auto& r : rows) {
        out << r.lag.str() << ',' << r.model << ',' << format_double(r.hourly_mtl) << ','
            << format_double(r.proposed.mean_time_savings) << ',' << format_double(r.proposed.chosen_expected) << ','
            << format_double(r.ground_truth.objective) << '\n';
    }
}

namespace {

// Short names RS1, RS2, ... in order of first use, plus a legend.
class SetNames {
public:
    std::string operator()(const AllocationKey& key) {
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            if (keys_[i] == key) return "RS" + std::to_string(i + 1);
        }
        keys_.push_back(key);
        return "RS" + std::to_string(keys_.size());
    }

    std::string legend(const Network& network) const {
        std::ostringstream os;
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            os << "RS" << i + 1 << " = " << network.describe(keys_[i]) << '\n';
        }
        return os.str();
    }

private:
    std::vector<AllocationKey> keys_;
};

struct Grid {
    std::vector<std::string> models;
    std::vector<HourStamp> lags;
    std::map<std::pair<HourStamp, std::string>, const ComparisonRow*> cells;

    explicit Grid(const std::vector<ComparisonRow>& rows) {
        for (const auto& r : rows) {
            if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
            if (std::find(lags.begin(), lags.end(), r.lag) == lags.end()) lags.push_back(r.lag);
            cells[{r.lag, r.model}] = &r;
        }
    }

    // Hour of day when every lag shares one date.
    std::string label(HourStamp lag) const {
        const bool one_day = std::all_of(lags.begin(), lags.end(), [&](HourStamp t) { return t.date() == lags.front().date(); });
        return one_day ? std::to_string(lag.hour()) : lag.str();
    }
};

std::string render(const std::vector<std::vector<std::string>>& table, std::size_t header_rows) {
    std::vector<std::size_t> width;
    for (const auto& row : table) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::size_t total = 0;
    for (auto w : width) total += w + 2;
    std::ostringstream os;
    for (std::size_t i = 0; i < table.size(); ++i) {
        std::string line;
        for (std::size_t c = 0; c < table[i].size(); ++c) {
            line += table[i][c] + std::string(width[c] - table[i][c].size() + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
        if (i + 1 == header_rows) os << std::string(total, '-') << '\n';
    }
    return os.str();
}

}  // namespace

std::string format_occurrence_table(const std::vector<ComparisonRow>& rows, const Network& network) {
    const Grid grid(rows);
    SetNames names;
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header{"Hour", "GT"};
    header.insert(header.end(), grid.models.begin(), grid.models.end());
    table.push_back(header);
    for (HourStamp lag : grid.lags) {
        const ComparisonRow* first = grid.cells.at({lag, grid.models.front()});
        const AllocationKey gt = first->ground_truth.key();
        const std::string gt_name = names(gt);
        std::vector<std::vector<std::string>> columns;
        std::size_t depth = 0;
        for (const auto& m : grid.models) {
            std::vector<std::string> col;
            const auto it = grid.cells.find({lag, m});
            if (it != grid.cells.end()) {
                for (const auto& h : it->second->proposed.histogram) {
                    const bool hit = h.key == gt;
                    col.push_back((hit ? std::string("*") : names(h.key)) + " (" + std::to_string(h.count) + ")");
                    if (hit) break;
                }
            }
            depth = std::max(depth, col.size());
            columns.push_back(std::move(col));
        }
        for (std::size_t d = 0; d < std::max<std::size_t>(depth, 1); ++d) {
            std::vector<std::string> line{d == 0 ? grid.label(lag) : "", d == 0 ? gt_name : ""};
            for (const auto& col : columns) line.push_back(d < col.size() ? col[d] : "");
            table.push_back(std::move(line));
        }
    }
    return render(table, 1) + "\n" + names.legend(network);
}

std::string format_strategy_table(const std::vector<ComparisonRow>& rows, const Network& network) {
    const Grid grid(rows);
    SetNames names;
    std::vector<std::vector<std::string>> table;
    std::vector<std::string> top{"", ""}, header{"Hour", "GT"};
    for (const auto& m : grid.models) {
        top.insert(top.end(), {m, "", ""});
        header.insert(header.end(), {"P", "M", "R"});
    }
    table.push_back(top);
    table.push_back(header);
    for (HourStamp lag : grid.lags) {
        const ComparisonRow* first = grid.cells.at({lag, grid.models.front()});
        const AllocationKey gt = first->ground_truth.key();
        std::vector<std::string> line{grid.label(lag), names(gt)};
        const auto mark = [&](const AllocationKey& k) { return k == gt ? std::string("*") : names(k); };
        for (const auto& m : grid.models) {
            const auto it = grid.cells.find({lag, m});
            if (it == grid.cells.end()) {
                line.insert(line.end(), {"", "", ""});
                continue;
            }
            const ComparisonRow& r = *it->second;
            line.push_back(mark(r.proposed.chosen_key()));
            line.push_back(mark(r.median.key()));
            line.push_back(mark(r.robust.key()));
        }
        table.push_back(std::move(line));
    }
    return render(table, 2) + "\n" + names.legend(network);
}

}  // namespace drt
