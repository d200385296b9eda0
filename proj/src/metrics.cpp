#include "drt/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "drt/error.hpp"

namespace drt {
namespace {

void check_aligned(std::span<const QuantileForecast> forecasts, const Series& truths) {
    if (forecasts.size() != truths.size()) {
        throw InvalidArgument("metrics: " + std::to_string(forecasts.size()) + " forecasts but " +
                              std::to_string(truths.size()) + " observations");
    }
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        if (forecasts[i].stamp != truths.stamps[i]) {
            throw InvalidArgument("metrics: forecast at " + forecasts[i].stamp.str() + " aligned with observation at " +
                                  truths.stamps[i].str());
        }
    }
}

std::pair<double, double> band(const QuantileForecast& f) {
    try {
        return {f.at(0.05), f.at(0.95)};
    } catch (const InvalidArgument&) {
        throw InvalidArgument("metrics: forecasts lack the 0.05/0.95 band levels");
    }
}

Spread spread(const std::vector<double>& v) {
    Spread s;
    if (v.empty()) {
        return s;
    }
    for (double x : v) {
        s.mean += x;
    }
    s.mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - s.mean) * (x - s.mean);
    }
    s.stddev = std::sqrt(ss / static_cast<double>(v.size()));
    return s;
}

}  // namespace

double mtl(std::span<const QuantileForecast> forecasts, const Series& truths) {
    check_aligned(forecasts, truths);
    if (forecasts.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        const auto& f = forecasts[i];
        for (std::size_t k = 0; k < f.levels.size(); ++k) {
            total += tilted_loss(f.levels[k], truths.values[i], f.values[k]);
        }
    }
    return total / static_cast<double>(forecasts.size());
}

double icp(std::span<const QuantileForecast> forecasts, const Series& truths) {
    check_aligned(forecasts, truths);
    if (forecasts.empty()) {
        return 0.0;
    }
    std::size_t inside = 0;
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        const auto [lo, hi] = band(forecasts[i]);
        inside += (lo <= truths.values[i] && truths.values[i] <= hi) ? 1 : 0;
    }
    return static_cast<double>(inside) / static_cast<double>(forecasts.size());
}

double mil(std::span<const QuantileForecast> forecasts) {
    if (forecasts.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto& f : forecasts) {
        const auto [lo, hi] = band(f);
        total += hi - lo;
    }
    return total / static_cast<double>(forecasts.size());
}

long crossings(std::span<const QuantileForecast> forecasts) {
    long n = 0;
    for (const auto& f : forecasts) {
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            for (std::size_t j = i + 1; j < f.values.size(); ++j) {
                n += f.values[i] > f.values[j] ? 1 : 0;
            }
        }
    }
    return n;
}

EvalReport evaluate(const ForecastTable& forecasts, const CountTable& truths, std::string model_name) {
    EvalReport r;
    r.model = std::move(model_name);
    std::vector<double> icps, mils, crosses;
    for (const auto& [pair, list] : forecasts) {
        Series obs{pair, {}, {}};
        for (const auto& f : list) {
            const auto* c = truths.count_at(pair, f.stamp);
            if (c == nullptr) {
                throw DataError("evaluate: no observation for " + truths.pair_label(pair) + " at " + f.stamp.str());
            }
            obs.push_back(f.stamp, static_cast<double>(*c));
        }
        PairMetrics m;
        m.pair = pair;
        m.lags = list.size();
        m.mtl = mtl(list, obs);
        m.icp = icp(list, obs);
        m.mil = mil(list);
        m.crossings = crossings(list);
        r.total_mtl += m.mtl;
        icps.push_back(m.icp);
        mils.push_back(m.mil);
        crosses.push_back(static_cast<double>(m.crossings));
        r.pairs.push_back(m);
    }
    r.icp = spread(icps);
    r.mil = spread(mils);
    r.crossings = spread(crosses);
    return r;
}

void write_reports_csv(std::ostream& out, std::span<const EvalReport> reports, const std::vector<std::string>& labels) {
    out << "model,origin,destination,lags,mtl,icp,mil,crossings\n";
    for (const auto& r : reports) {
        for (const auto& p : r.pairs) {
            out << r.model << ',' << labels.at(static_cast<std::size_t>(p.pair.origin)) << ','
                << labels.at(static_cast<std::size_t>(p.pair.destination)) << ',' << p.lags << ','
                << format_double(p.mtl) << ',' << format_double(p.icp) << ',' << format_double(p.mil) << ','
                << p.crossings << '\n';
        }
    }
    out << "\nmodel,total_mtl,mean_icp,std_icp,mean_mil,std_mil,mean_crossings,std_crossings\n";
    for (const auto& r : reports) {
        out << r.model << ',' << format_double(r.total_mtl) << ',' << format_double(r.icp.mean) << ','
            << format_double(r.icp.stddev) << ',' << format_double(r.mil.mean) << ',' << format_double(r.mil.stddev)
            << ',' << format_double(r.crossings.mean) << ',' << format_double(r.crossings.stddev) << '\n';
    }
}

std::string format_reports_table(std::span<const EvalReport> reports) {
    std::size_t width = 5;
    for (const auto& r : reports) {
        width = std::max(width, r.model.size());
    }
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s  %10s  %-18s  %-20s  %-20s\n", static_cast<int>(width), "Model", "Total MTL",
                  "Mean ICP(5-95)", "Mean MIL(5-95)", "Mean #cross");
    out += buf;
    for (const auto& r : reports) {
        char icp_s[64], mil_s[64], cr_s[64];
        std::snprintf(icp_s, sizeof icp_s, "%.3f (+-%.3f)", r.icp.mean, r.icp.stddev);
        std::snprintf(mil_s, sizeof mil_s, "%.3f (+-%.3f)", r.mil.mean, r.mil.stddev);
        std::snprintf(cr_s, sizeof cr_s, "%.3f (+-%.3f)", r.crossings.mean, r.crossings.stddev);
        std::snprintf(buf, sizeof buf, "%-*s  %10.3f  %-18s  %-20s  %-20s\n", static_cast<int>(width),
                      r.model.c_str(), r.total_mtl, icp_s, mil_s, cr_s);
        out += buf;
    }
    return out;
}

}  // namespace drt
