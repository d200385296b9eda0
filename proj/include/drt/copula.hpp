#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "drt/data.hpp"
#include "drt/quantile.hpp"

namespace drt {

/// Univariate CDF given by knots (value, level). Right-continuous.
class EmpiricalCDF {
public:
    struct Knot {
        double value = 0.0;
        double level = 0.0;
        bool operator==(const Knot&) const = default;
    };

    /// Step CDF F(y) = #{x <= y} / n. Throws InvalidArgument on empty input.
    static EmpiricalCDF from_history(std::span<const double> values);

    /// Piecewise-linear CDF through (0, 0), (yhat_q, q) for every level, and
    /// (yhat_first + yhat_last, 1). Values are clipped at 0 and sorted first.
    /// Coinciding knot values produce a jump; when all values coincide the
    /// result is a point mass. Levels must lie inside (0, 1).
    static EmpiricalCDF from_forecast(const QuantileForecast& f);

    double cdf(double y) const;
    /// inf{y : F(y) >= u}; u is clamped to [0, 1].
    double inverse(double u) const;

    const std::vector<Knot>& knots() const noexcept { return knots_; }
    bool stepwise() const noexcept { return stepwise_; }

private:
    std::vector<Knot> knots_;
    bool stepwise_ = false;
};

/// Clips eigenvalues below `min_eigenvalue`, rescales to unit diagonal and
/// repeats until the smallest eigenvalue is at least `min_eigenvalue`.
/// Throws NumericError when that does not happen within 100 rounds.
Eigen::MatrixXd repair_correlation(const Eigen::MatrixXd& c, double min_eigenvalue = 1e-8);

/// Running moments of normal-score vectors; supports adding observations to a
/// fitted correlation without revisiting the history.
class CorrelationAccumulator {
public:
    explicit CorrelationAccumulator(std::size_t dim = 0);
    void add(std::span<const double> scores);
    std::size_t count() const noexcept { return n_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(sum_.size()); }
    /// Normalized correlation; components with zero variance are uncorrelated
    /// with everything else.
    Eigen::MatrixXd correlation() const;

private:
    std::size_t n_ = 0;
    Eigen::VectorXd sum_;
    Eigen::MatrixXd cross_;
};

/// Demand draws: one row per sample, one column per pair of `order`.
struct DemandSamples {
    std::vector<ODPair> order;
    Eigen::MatrixXd values;
};

class GaussianCopula {
public:
    GaussianCopula() = default;

    /// Normal scores of mid-ranks per pair, then correlation, repair and
    /// Cholesky factorization. All series must share the same stamps and have
    /// at least `min_lags` of them.
    static GaussianCopula fit(const std::map<ODPair, Series>& history, std::size_t min_lags = 30);
    /// Repairs and factorizes a given correlation.
    static GaussianCopula from_correlation(std::vector<ODPair> order, const Eigen::MatrixXd& corr);

    const std::vector<ODPair>& pair_order() const noexcept { return order_; }
    const Eigen::MatrixXd& correlation() const noexcept { return corr_; }
    const Eigen::MatrixXd& cholesky() const noexcept { return chol_; }
    /// Accumulator holding the fitting data (empty for from_correlation).
    const CorrelationAccumulator& accumulator() const noexcept { return acc_; }

    /// k joint draws: z = L e, u = Phi(z), lambda = F^-1(u) per pair. Sample i
    /// uses its own generator seeded from (seed, i), so the result does not
    /// depend on `threads`. Throws InvalidArgument when a pair has no forecast.
    DemandSamples sample(const std::map<ODPair, QuantileForecast>& forecasts, std::size_t k, std::uint64_t seed,
                         unsigned threads = 1) const;

private:
    std::vector<ODPair> order_;
    Eigen::MatrixXd corr_;
    Eigen::MatrixXd chol_;
    CorrelationAccumulator acc_;
};

/// Per-sample generator seed.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

/// Normal scores Phi^-1((less + equal/2) / n) of a sample.
std::vector<double> normal_scores(std::span<const double> values);

/// CSV with header `pair,<o->d>,...` and one row per pair.
void write_correlation_csv(std::ostream& out, const GaussianCopula& copula, const std::vector<std::string>& labels);
GaussianCopula read_correlation_csv(std::istream& in, const std::vector<std::string>& labels,
                                    const std::string& source = "<stream>");
/// CSV with header `sample,<o->d>,...`.
void write_samples_csv(std::ostream& out, const DemandSamples& samples, const std::vector<std::string>& labels);

/// "o->d" using location labels.
std::string pair_label(ODPair pair, const std::vector<std::string>& labels);
/// Inverse of pair_label; throws DataError.
ODPair parse_pair_label(const std::string& text, const std::vector<std::string>& labels);

}  // namespace drt
