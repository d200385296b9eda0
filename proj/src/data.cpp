#include "drt/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "drt/error.hpp"

namespace drt {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

struct RawRow {
    HourStamp stamp;
    std::string origin;
    std::string destination;
    std::int64_t count;
};

}  // namespace

std::size_t Series::lower_index(HourStamp t) const {
    return static_cast<std::size_t>(std::lower_bound(stamps.begin(), stamps.end(), t) - stamps.begin());
}

const double* Series::find(HourStamp t) const {
    const auto i = lower_index(t);
    return (i < stamps.size() && stamps[i] == t) ? &values[i] : nullptr;
}

int CountTable::location_id(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw DataError("unknown location '" + label + "'");
    }
    return static_cast<int>(it - labels.begin());
}

std::string CountTable::pair_label(ODPair pair) const {
    return labels.at(static_cast<std::size_t>(pair.origin)) + "->" +
           labels.at(static_cast<std::size_t>(pair.destination));
}

const std::int64_t* CountTable::count_at(ODPair pair, HourStamp t) const {
    const auto it = series.find(pair);
    if (it == series.end()) {
        return nullptr;
    }
    const auto& obs = it->second.observations;
    const auto pos = std::lower_bound(obs.begin(), obs.end(), t,
                                      [](const Observation& o, HourStamp s) { return o.stamp < s; });
    return (pos != obs.end() && pos->stamp == t) ? &pos->count : nullptr;
}

CountTable parse_od_counts(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw DataError(source + ": empty file, header row required");
    }
    ++line_no;
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
        line = line.substr(3);  // UTF-8 BOM
    }
    const auto header = split_csv(line);
    if (header.size() != 4 || header[0] != "timestamp" || header[1] != "origin" ||
        header[2] != "destination" || header[3] != "count") {
        throw DataError(source + ":1: expected header 'timestamp,origin,destination,count'");
    }

    std::vector<RawRow> rows;
    std::set<std::string> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto where = source + ":" + std::to_string(line_no) + ": ";
        const auto fields = split_csv(line);
        if (fields.size() != 4) {
            throw DataError(where + "expected 4 fields, got " + std::to_string(fields.size()));
        }
        RawRow row{};
        try {
            row.stamp = HourStamp::parse(fields[0]);
        } catch (const DataError& e) {
            throw DataError(where + e.what());
        }
        row.origin = fields[1];
        row.destination = fields[2];
        if (row.origin.empty() || row.destination.empty()) {
            throw DataError(where + "empty location label");
        }
        if (row.origin == row.destination) {
            throw DataError(where + "self-loop OD pair '" + row.origin + "'");
        }
        const auto& c = fields[3];
        auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), row.count);
        if (ec != std::errc() || ptr != c.data() + c.size()) {
            throw DataError(where + "non-integer count '" + c + "'");
        }
        if (row.count < 0) {
            throw DataError(where + "negative count");
        }
        labels.insert(row.origin);
        labels.insert(row.destination);
        rows.push_back(std::move(row));
    }

    CountTable table;
    table.labels.assign(labels.begin(), labels.end());
    for (const auto& row : rows) {
        const ODPair pair{table.location_id(row.origin), table.location_id(row.destination)};
        auto& s = table.series[pair];
        s.pair = pair;
        s.observations.push_back({row.stamp, row.count});
    }
    for (auto& [pair, s] : table.series) {
        std::stable_sort(s.observations.begin(), s.observations.end(),
                         [](const Observation& a, const Observation& b) { return a.stamp < b.stamp; });
        for (std::size_t i = 1; i < s.observations.size(); ++i) {
            if (s.observations[i].stamp == s.observations[i - 1].stamp) {
                throw DataError(source + ": duplicate row for " + table.pair_label(pair) + " at " +
                                s.observations[i].stamp.str());
            }
        }
    }
    return table;
}

CountTable load_od_counts(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return parse_od_counts(in, path.string());
}

void write_od_counts(std::ostream& out, const CountTable& table) {
    out << "timestamp,origin,destination,count\n";
    // Rows ordered by time, then pair, so files diff cleanly.
    std::vector<std::pair<HourStamp, ODPair>> keys;
    for (const auto& [pair, s] : table.series) {
        for (const auto& o : s.observations) {
            keys.emplace_back(o.stamp, pair);
        }
    }
    std::sort(keys.begin(), keys.end());
    for (const auto& [t, pair] : keys) {
        out << t.str() << ',' << table.labels[static_cast<std::size_t>(pair.origin)] << ','
            << table.labels[static_cast<std::size_t>(pair.destination)] << ',' << *table.count_at(pair, t)
            << '\n';
    }
}

void save_od_counts(const std::filesystem::path& path, const CountTable& table) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    write_od_counts(out, table);
}

Series to_series(const ODCountSeries& counts) {
    Series s;
    s.pair = counts.pair;
    s.stamps.reserve(counts.size());
    s.values.reserve(counts.size());
    for (const auto& o : counts.observations) {
        s.push_back(o.stamp, static_cast<double>(o.count));
    }
    return s;
}

Series difference(const Series& series) {
    if (series.size() < 2) {
        throw InvalidArgument("difference: series needs at least 2 lags");
    }
    Series out;
    out.pair = series.pair;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series.stamps[i] - series.stamps[i - 1] == 1) {
            out.push_back(series.stamps[i], series.values[i] - series.values[i - 1]);
        }
    }
    return out;
}

Series difference(const ODCountSeries& counts) { return difference(to_series(counts)); }

bool SplitSpec::is_masked(HourStamp t) const {
    if (masked_hours.count(t.hour()) != 0) {
        return true;
    }
    const Date d = t.date();
    return std::any_of(masked_dates.begin(), masked_dates.end(),
                       [&](const DateRange& r) { return r.contains(d); });
}

void SplitSpec::validate() const {
    if (train.last < train.first || test.last < test.first) {
        throw InvalidArgument("split: range end precedes its start");
    }
    if (!(train.last < test.first)) {
        throw InvalidArgument("split: train range must precede and not overlap the test range");
    }
    for (int h : masked_hours) {
        if (h < 0 || h > 23) {
            throw InvalidArgument("split: masked hour out of range: " + std::to_string(h));
        }
    }
}

SplitSpec SplitSpec::campus_preset() {
    SplitSpec s;
    s.train = {Date{2017, 11, 17}, Date{2018, 1, 7}};
    s.test = {Date{2018, 1, 8}, Date{2018, 1, 14}};
    s.masked_hours = {23, 0, 1, 2, 3, 4, 5, 6};
    s.masked_dates = {{Date{2017, 12, 23}, Date{2018, 1, 1}}};
    return s;
}

Series mask_lags(const Series& series, const SplitSpec& spec) {
    Series out;
    out.pair = series.pair;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!spec.is_masked(series.stamps[i])) {
            out.push_back(series.stamps[i], series.values[i]);
        }
    }
    return out;
}

ODCountSeries mask_lags(const ODCountSeries& series, const SplitSpec& spec) {
    ODCountSeries out;
    out.pair = series.pair;
    std::copy_if(series.observations.begin(), series.observations.end(), std::back_inserter(out.observations),
                 [&](const Observation& o) { return !spec.is_masked(o.stamp); });
    return out;
}

Series select_range(const Series& series, const DateRange& range) {
    Series out;
    out.pair = series.pair;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (range.contains(series.stamps[i])) {
            out.push_back(series.stamps[i], series.values[i]);
        }
    }
    return out;
}

}  // namespace drt
