#include "drt/seasonal.hpp"

#include <cmath>

namespace drt {

SeasonalStats::SeasonalStats(const History& train) {
    for (const auto& [pair, s] : train) {
        std::map<Cell, std::vector<double>> groups;
        for (std::size_t i = 0; i < s.size(); ++i) {
            groups[{s.stamps[i].weekday(), s.stamps[i].hour()}].push_back(s.values[i]);
        }
        auto& out = cells_[pair];
        for (const auto& [cell, v] : groups) {
            double mean = 0.0;
            for (double x : v) {
                mean += x;
            }
            mean /= static_cast<double>(v.size());
            double ss = 0.0;
            for (double x : v) {
                ss += (x - mean) * (x - mean);
            }
            out[cell] = Moments{mean, std::sqrt(ss / static_cast<double>(v.size())), v.size()};
        }
    }
}

SeasonalStats SeasonalStats::from_cells(std::map<ODPair, std::map<Cell, Moments>> cells) {
    SeasonalStats s;
    s.cells_ = std::move(cells);
    return s;
}

const SeasonalStats::Moments* SeasonalStats::lookup(ODPair pair, HourStamp t) const {
    const auto p = cells_.find(pair);
    if (p == cells_.end()) {
        return nullptr;
    }
    const auto c = p->second.find({t.weekday(), t.hour()});
    if (c == p->second.end() || !(c->second.stddev > 0.0)) {
        return nullptr;
    }
    return &c->second;
}

bool SeasonalStats::scales(ODPair pair, HourStamp t) const { return lookup(pair, t) != nullptr; }

double SeasonalStats::normalize(ODPair pair, HourStamp t, double v) const {
    const auto* m = lookup(pair, t);
    return m ? (v - m->mean) / m->stddev : v;
}

double SeasonalStats::denormalize(ODPair pair, HourStamp t, double v) const {
    const auto* m = lookup(pair, t);
    return m ? v * m->stddev + m->mean : v;
}

Series SeasonalStats::normalize(const Series& s) const {
    Series out = s;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.values[i] = normalize(s.pair, s.stamps[i], s.values[i]);
    }
    return out;
}

Series SeasonalStats::denormalize(const Series& s) const {
    Series out = s;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.values[i] = denormalize(s.pair, s.stamps[i], s.values[i]);
    }
    return out;
}

std::size_t SeasonalStats::passthrough_cells() const {
    std::size_t n = 0;
    for (const auto& [pair, cells] : cells_) {
        for (const auto& [cell, m] : cells) {
            n += m.stddev > 0.0 ? 0 : 1;
        }
    }
    return n;
}

}  // namespace drt
