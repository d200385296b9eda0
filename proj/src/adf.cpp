#include "drt/adf.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>

#include "drt/error.hpp"

namespace drt {

namespace {

struct OlsFit {
    double tstat = 0.0;
    double aic = 0.0;
};

// Rows t = first..n-1 of the ADF regression with `lags` augmenting terms.
OlsFit fit_adf_regression(std::span<const double> y, std::size_t lags, std::size_t first) {
    const auto n = y.size();
    const auto rows = static_cast<Eigen::Index>(n - first);
    const auto cols = static_cast<Eigen::Index>(2 + lags);
    if (rows <= cols) {
        throw InvalidArgument("adf_test: too few observations for " + std::to_string(lags) + " lags");
    }
    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd dy(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = first + static_cast<std::size_t>(r);
        dy(r) = y[t] - y[t - 1];
        x(r, 0) = 1.0;
        x(r, 1) = y[t - 1];
        for (std::size_t i = 1; i <= lags; ++i) {
            x(r, static_cast<Eigen::Index>(1 + i)) = y[t - i] - y[t - i - 1];
        }
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < cols) {
        throw NumericError("adf_test: singular regression matrix");
    }
    const Eigen::VectorXd beta = qr.solve(dy);
    const Eigen::VectorXd resid = dy - x * beta;
    const double rss = resid.squaredNorm();
    const double sigma2 = rss / static_cast<double>(rows - cols);
    const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
    const double se = std::sqrt(sigma2 * xtx_inv(1, 1));
    OlsFit fit;
    fit.tstat = se > 0.0 ? beta(1) / se : -std::numeric_limits<double>::infinity();
    const double m = static_cast<double>(rows);
    fit.aic = m * std::log(std::max(rss, std::numeric_limits<double>::min()) / m) + 2.0 * static_cast<double>(cols);
    return fit;
}

}  // namespace

std::size_t schwert_max_lag(std::size_t n) {
    return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

double adf_critical_value_1pct(std::size_t nobs) {
    // Fuller (1976), constant-only, 1% level.
    static constexpr std::array<std::pair<double, double>, 6> table{{
        {25.0, -3.75}, {50.0, -3.58}, {100.0, -3.51}, {250.0, -3.46}, {500.0, -3.44}, {1e300, -3.43}}};
    const double n = static_cast<double>(nobs);
    if (n <= table.front().first) {
        return table.front().second;
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (n <= table[i].first) {
            const double inv0 = 1.0 / table[i - 1].first;
            const double inv1 = 1.0 / table[i].first;
            const double w = (1.0 / n - inv0) / (inv1 - inv0);
            return table[i - 1].second + w * (table[i].second - table[i - 1].second);
        }
    }
    return table.back().second;
}

AdfResult adf_test(std::span<const double> series, std::optional<std::size_t> max_lag) {
    const auto n = series.size();
    const std::size_t maxlag = max_lag.value_or(schwert_max_lag(n));
    if (n <= maxlag + 2) {
        throw InvalidArgument("adf_test: series length " + std::to_string(n) + " must exceed max_lag + 2 = " +
                              std::to_string(maxlag + 2));
    }
    for (double v : series) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("adf_test: non-finite value in series");
        }
    }

    std::size_t best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p <= maxlag; ++p) {
        const auto fit = fit_adf_regression(series, p, maxlag + 1);
        if (fit.aic < best_aic) {
            best_aic = fit.aic;
            best_lag = p;
        }
    }
    const auto first = best_lag + 1;
    const auto fit = fit_adf_regression(series, best_lag, first);

    AdfResult result;
    result.statistic = fit.tstat;
    result.lags = best_lag;
    result.nobs = n - first;
    result.critical_value_1pct = adf_critical_value_1pct(result.nobs);
    result.reject_unit_root = result.statistic < result.critical_value_1pct;
    return result;
}

}  // namespace drt
