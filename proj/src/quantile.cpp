#include "drt/quantile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "drt/error.hpp"

namespace drt {

QuantileSet::QuantileSet(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) {
        throw InvalidArgument("quantile set must not be empty");
    }
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (!(levels_[i] >= 0.0 && levels_[i] <= 1.0)) {
            throw InvalidArgument("quantile level outside [0, 1]");
        }
        if (i > 0 && !(levels_[i] > levels_[i - 1])) {
            throw InvalidArgument("quantile levels must be strictly increasing");
        }
    }
}

QuantileSet QuantileSet::standard() { return QuantileSet({0.05, 0.25, 0.50, 0.75, 0.95}); }

std::optional<std::size_t> QuantileSet::index_of(double q) const {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (std::abs(levels_[i] - q) < 1e-12) {
            return i;
        }
    }
    return std::nullopt;
}

bool QuantileSet::interior() const { return levels_.front() > 0.0 && levels_.back() < 1.0; }

double QuantileForecast::at(double q) const {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (std::abs(levels[i] - q) < 1e-12) {
            return values[i];
        }
    }
    throw InvalidArgument("forecast has no level " + format_double(q));
}

double tilted_loss(double q, double y, double yhat) {
    const double e = y - yhat;
    return std::max(q * e, (q - 1.0) * e);
}

double mean_tilted_loss(double q, std::span<const double> sample, double constant) {
    double sum = 0.0;
    for (double y : sample) {
        sum += tilted_loss(q, y, constant);
    }
    return sample.empty() ? 0.0 : sum / static_cast<double>(sample.size());
}

double interpolated_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw InvalidArgument("quantile of an empty sample");
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double lower_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw InvalidArgument("quantile of an empty sample");
    }
    const double rank = std::ceil(q * static_cast<double>(sorted.size()) - 1e-12);
    const auto idx = static_cast<std::size_t>(std::clamp(rank - 1.0, 0.0, static_cast<double>(sorted.size() - 1)));
    return sorted[idx];
}

void postprocess_quantiles(std::vector<double>& values, bool sort) {
    for (double& v : values) {
        v = std::max(v, 0.0);
    }
    if (sort) {
        std::sort(values.begin(), values.end());
    }
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_forecasts(std::ostream& out, const ForecastTable& table, const std::vector<std::string>& labels) {
    out << "timestamp,origin,destination,q,value\n";
    for (const auto& [pair, forecasts] : table) {
        const auto& o = labels.at(static_cast<std::size_t>(pair.origin));
        const auto& d = labels.at(static_cast<std::size_t>(pair.destination));
        for (const auto& f : forecasts) {
            for (std::size_t i = 0; i < f.levels.size(); ++i) {
                out << f.stamp.str() << ',' << o << ',' << d << ',' << format_double(f.levels[i]) << ','
                    << format_double(f.values[i]) << '\n';
            }
        }
    }
}

ForecastTable read_forecasts(std::istream& in, const std::vector<std::string>& labels, const std::string& source) {
    auto id_of = [&](const std::string& label, std::size_t line_no) {
        const auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            throw DataError(source + ":" + std::to_string(line_no) + ": unknown location '" + label + "'");
        }
        return static_cast<int>(it - labels.begin());
    };
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line.rfind("timestamp,origin,destination,q,value", 0) != 0) {
        throw DataError(source + ":1: expected header 'timestamp,origin,destination,q,value'");
    }
    ForecastTable table;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        std::stringstream ss(line);
        std::string ts, o, d, q, v;
        if (!std::getline(ss, ts, ',') || !std::getline(ss, o, ',') || !std::getline(ss, d, ',') ||
            !std::getline(ss, q, ',') || !std::getline(ss, v)) {
            throw DataError(source + ":" + std::to_string(line_no) + ": expected 5 fields");
        }
        double qv = 0.0;
        double vv = 0.0;
        try {
            qv = std::stod(q);
            vv = std::stod(v);
        } catch (const std::exception&) {
            throw DataError(source + ":" + std::to_string(line_no) + ": non-numeric field");
        }
        const ODPair pair{id_of(o, line_no), id_of(d, line_no)};
        const auto stamp = HourStamp::parse(ts);
        auto& list = table[pair];
        if (list.empty() || list.back().stamp != stamp) {
            list.push_back(QuantileForecast{pair, stamp, {}, {}});
        }
        list.back().levels.push_back(qv);
        list.back().values.push_back(vv);
    }
    return table;
}

void save_forecasts(const std::filesystem::path& path, const ForecastTable& table,
                    const std::vector<std::string>& labels) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    write_forecasts(out, table, labels);
}

ForecastTable load_forecasts(const std::filesystem::path& path, const std::vector<std::string>& labels) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return read_forecasts(in, labels, path.string());
}

}  // namespace drt
