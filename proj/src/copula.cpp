#include "drt/copula.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "drt/error.hpp"
#include "drt/log.hpp"
#include "drt/parallel.hpp"

namespace drt {

EmpiricalCDF EmpiricalCDF::from_history(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidArgument("empirical CDF of an empty history");
    }
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    EmpiricalCDF f;
    f.stepwise_ = true;
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i + 1 == v.size() || v[i + 1] != v[i]) {
            f.knots_.push_back(Knot{v[i], static_cast<double>(i + 1) / n});
        }
    }
    return f;
}

EmpiricalCDF EmpiricalCDF::from_forecast(const QuantileForecast& fc) {
    if (fc.levels.empty() || fc.levels.size() != fc.values.size()) {
        throw InvalidArgument("forecast CDF: forecast has no levels");
    }
    if (fc.levels.front() <= 0.0 || fc.levels.back() >= 1.0 ||
        !std::is_sorted(fc.levels.begin(), fc.levels.end())) {
        throw InvalidArgument("forecast CDF: levels must be increasing inside (0, 1)");
    }
    std::vector<double> v = fc.values;
    postprocess_quantiles(v, true);
    EmpiricalCDF f;
    if (v.front() == v.back()) {
        // No spread at all: a point mass rather than tails around it.
        f.knots_.push_back(Knot{v.front(), 1.0});
        f.stepwise_ = true;
        return f;
    }
    f.knots_.push_back(Knot{0.0, 0.0});
    for (std::size_t i = 0; i < v.size(); ++i) {
        f.knots_.push_back(Knot{v[i], fc.levels[i]});
    }
    f.knots_.push_back(Knot{v.back() + v.front(), 1.0});
    return f;
}

double EmpiricalCDF::cdf(double y) const {
    // Last knot with value <= y.
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), y,
                                     [](double a, const Knot& k) { return a < k.value; });
    if (it == knots_.begin()) {
        return 0.0;
    }
    const auto j = static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (stepwise_ || j + 1 == knots_.size()) {
        return knots_[j].level;
    }
    const auto& a = knots_[j];
    const auto& b = knots_[j + 1];
    return a.level + (b.level - a.level) * (y - a.value) / (b.value - a.value);
}

double EmpiricalCDF::inverse(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    if (stepwise_) {
        for (const auto& k : knots_) {
            if (k.level >= u) {
                return k.value;
            }
        }
        return knots_.back().value;
    }
    if (u <= knots_.front().level) {
        return knots_.front().value;
    }
    for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
        const auto& a = knots_[j];
        const auto& b = knots_[j + 1];
        if (b.level >= u) {
            if (b.value == a.value) {
                return a.value;
            }
            return a.value + (u - a.level) / (b.level - a.level) * (b.value - a.value);
        }
    }
    return knots_.back().value;
}

Eigen::MatrixXd repair_correlation(const Eigen::MatrixXd& input, double min_eigenvalue) {
    if (input.rows() != input.cols()) {
        throw InvalidArgument("correlation matrix must be square");
    }
    if (!input.allFinite()) {
        throw NumericError("correlation matrix has non-finite entries");
    }
    Eigen::MatrixXd c = 0.5 * (input + input.transpose());
    const auto n = c.rows();
    for (int round = 0; round < 100; ++round) {
        for (Eigen::Index i = 0; i < n; ++i) {
            c(i, i) = 1.0;
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
        if (es.info() != Eigen::Success) {
            throw NumericError("correlation repair: eigen decomposition failed");
        }
        if (n == 0 || es.eigenvalues().minCoeff() >= min_eigenvalue) {
            return c;
        }
        const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(2.0 * min_eigenvalue);
        c = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
        const Eigen::VectorXd d = c.diagonal().cwiseSqrt().cwiseInverse();
        c = d.asDiagonal() * c * d.asDiagonal();
        c = 0.5 * (c + c.transpose());
    }
    throw NumericError("correlation repair did not reach a positive definite matrix");
}

CorrelationAccumulator::CorrelationAccumulator(std::size_t dim)
    : sum_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))),
      cross_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))) {}

void CorrelationAccumulator::add(std::span<const double> scores) {
    if (scores.size() != dim()) {
        throw InvalidArgument("correlation accumulator: dimension mismatch");
    }
    const Eigen::Map<const Eigen::VectorXd> z(scores.data(), static_cast<Eigen::Index>(scores.size()));
    if (!z.allFinite()) {
        throw NumericError("correlation accumulator: non-finite normal score");
    }
    sum_ += z;
    cross_.noalias() += z * z.transpose();
    ++n_;
}

Eigen::MatrixXd CorrelationAccumulator::correlation() const {
    const auto d = sum_.size();
    if (n_ < 2) {
        throw InvalidArgument("correlation needs at least two observations");
    }
    const double n = static_cast<double>(n_);
    const Eigen::VectorXd mean = sum_ / n;
    const Eigen::MatrixXd cov = cross_ / n - mean * mean.transpose();
    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            const double vi = cov(i, i);
            const double vj = cov(j, j);
            const double tiny = 1e-12;
            if (vi > tiny && vj > tiny) {
                c(i, j) = c(j, i) = std::clamp(cov(i, j) / std::sqrt(vi * vj), -1.0, 1.0);
            }
        }
    }
    return c;
}

std::vector<double> normal_scores(std::span<const double> values) {
    const auto n = values.size();
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    static const boost::math::normal_distribution<double> std_normal;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto lo = std::lower_bound(sorted.begin(), sorted.end(), values[i]);
        const auto hi = std::upper_bound(lo, sorted.end(), values[i]);
        const double less = static_cast<double>(lo - sorted.begin());
        const double equal = static_cast<double>(hi - lo);
        out[i] = boost::math::quantile(std_normal, (less + 0.5 * equal) / static_cast<double>(n));
    }
    return out;
}

GaussianCopula GaussianCopula::fit(const std::map<ODPair, Series>& history, std::size_t min_lags) {
    if (history.empty()) {
        throw InvalidArgument("copula fit: no series");
    }
    const auto& stamps = history.begin()->second.stamps;
    if (stamps.size() < min_lags) {
        throw InvalidArgument("copula fit: needs at least " + std::to_string(min_lags) + " aligned lags, got " +
                              std::to_string(stamps.size()));
    }
    GaussianCopula g;
    std::vector<std::vector<double>> scores;
    for (const auto& [pair, s] : history) {
        if (s.stamps != stamps) {
            throw DataError("copula fit: series do not share the same lags");
        }
        g.order_.push_back(pair);
        scores.push_back(normal_scores(s.values));
    }
    g.acc_ = CorrelationAccumulator(g.order_.size());
    std::vector<double> row(g.order_.size());
    for (std::size_t t = 0; t < stamps.size(); ++t) {
        for (std::size_t p = 0; p < row.size(); ++p) {
            row[p] = scores[p][t];
        }
        g.acc_.add(row);
    }
    auto order = g.order_;
    auto acc = g.acc_;
    g = from_correlation(std::move(order), acc.correlation());
    g.acc_ = std::move(acc);
    return g;
}

GaussianCopula GaussianCopula::from_correlation(std::vector<ODPair> order, const Eigen::MatrixXd& corr) {
    if (static_cast<Eigen::Index>(order.size()) != corr.rows()) {
        throw InvalidArgument("copula: pair order does not match the correlation size");
    }
    GaussianCopula g;
    g.order_ = std::move(order);
    g.corr_ = repair_correlation(corr);
    const Eigen::LLT<Eigen::MatrixXd> llt(g.corr_);
    if (llt.info() != Eigen::Success) {
        throw NumericError("copula: Cholesky factorization failed");
    }
    g.chol_ = llt.matrixL();
    return g;
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 applied to a combination of both inputs.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

DemandSamples GaussianCopula::sample(const std::map<ODPair, QuantileForecast>& forecasts, std::size_t k,
                                     std::uint64_t seed, unsigned threads) const {
    std::vector<EmpiricalCDF> marginals;
    marginals.reserve(order_.size());
    for (const auto& pair : order_) {
        const auto it = forecasts.find(pair);
        if (it == forecasts.end()) {
            throw InvalidArgument("copula sample: no forecast for pair (" + std::to_string(pair.origin) + ", " +
                                  std::to_string(pair.destination) + ")");
        }
        marginals.push_back(EmpiricalCDF::from_forecast(it->second));
    }
    DemandSamples out;
    out.order = order_;
    const auto d = static_cast<Eigen::Index>(order_.size());
    out.values.resize(static_cast<Eigen::Index>(k), d);
    static const boost::math::normal_distribution<double> std_normal;
    parallel_for(k, threads, [&](std::size_t i) {
        std::mt19937_64 rng(sample_seed(seed, i));
        std::normal_distribution<double> n01;
        Eigen::VectorXd e(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            e[j] = n01(rng);
        }
        const Eigen::VectorXd z = chol_ * e;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double u = boost::math::cdf(std_normal, z[j]);
            out.values(static_cast<Eigen::Index>(i), j) =
                std::max(0.0, marginals[static_cast<std::size_t>(j)].inverse(u));
        }
    });
    return out;
}

std::string pair_label(ODPair pair, const std::vector<std::string>& labels) {
    return labels.at(static_cast<std::size_t>(pair.origin)) + "->" + labels.at(static_cast<std::size_t>(pair.destination));
}

ODPair parse_pair_label(const std::string& text, const std::vector<std::string>& labels) {
    const auto arrow = text.find("->");
    if (arrow == std::string::npos) {
        throw DataError("malformed pair label '" + text + "'");
    }
    auto id = [&](const std::string& l) {
        const auto it = std::find(labels.begin(), labels.end(), l);
        if (it == labels.end()) {
            throw DataError("unknown location '" + l + "' in pair label '" + text + "'");
        }
        return static_cast<int>(it - labels.begin());
    };
    return ODPair{id(text.substr(0, arrow)), id(text.substr(arrow + 2))};
}

void write_correlation_csv(std::ostream& out, const GaussianCopula& copula, const std::vector<std::string>& labels) {
    const auto& order = copula.pair_order();
    out << "pair";
    for (const auto& p : order) {
        out << ',' << pair_label(p, labels);
    }
    out << '\n';
    for (std::size_t i = 0; i < order.size(); ++i) {
        out << pair_label(order[i], labels);
        for (std::size_t j = 0; j < order.size(); ++j) {
            out << ',' << format_double(copula.correlation()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
        out << '\n';
    }
}

GaussianCopula read_correlation_csv(std::istream& in, const std::vector<std::string>& labels,
                                    const std::string& source) {
    auto split = [](const std::string& line) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (!cell.empty() && cell.back() == '\r') {
                cell.pop_back();
            }
            f.push_back(cell);
        }
        return f;
    };
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(source + ": empty correlation file");
    }
    const auto header = split(line);
    if (header.empty() || header[0] != "pair") {
        throw DataError(source + ":1: expected header starting with 'pair'");
    }
    std::vector<ODPair> order;
    for (std::size_t i = 1; i < header.size(); ++i) {
        order.push_back(parse_pair_label(header[i], labels));
    }
    const auto n = static_cast<Eigen::Index>(order.size());
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::getline(in, line)) {
            throw DataError(source + ": expected " + std::to_string(n) + " matrix rows");
        }
        const auto f = split(line);
        const auto where = source + ":" + std::to_string(i + 2) + ": ";
        if (static_cast<Eigen::Index>(f.size()) != n + 1 || parse_pair_label(f[0], labels) != order[static_cast<std::size_t>(i)]) {
            throw DataError(where + "row does not match the header");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            try {
                c(i, j) = std::stod(f[static_cast<std::size_t>(j + 1)]);
            } catch (const std::exception&) {
                throw DataError(where + "non-numeric entry");
            }
        }
    }
    return GaussianCopula::from_correlation(std::move(order), c);
}

void write_samples_csv(std::ostream& out, const DemandSamples& samples, const std::vector<std::string>& labels) {
    out << "sample";
    for (const auto& p : samples.order) {
        out << ',' << pair_label(p, labels);
    }
    out << '\n';
    for (Eigen::Index i = 0; i < samples.values.rows(); ++i) {
        out << i;
        for (Eigen::Index j = 0; j < samples.values.cols(); ++j) {
            out << ',' << format_double(samples.values(i, j));
        }
        out << '\n';
    }
}

}  // namespace drt
