#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace drt {

/// Outcome of an augmented Dickey-Fuller test (constant, no trend).
struct AdfResult {
    double statistic = 0.0;           ///< t-statistic of the lagged-level coefficient
    double critical_value_1pct = 0.0; ///< interpolated for the regression sample size
    bool reject_unit_root = false;    ///< statistic < critical value
    std::size_t lags = 0;             ///< augmenting lags chosen by AIC
    std::size_t nobs = 0;             ///< observations in the final regression
};

/// Schwert's rule: floor(12 * (n / 100)^(1/4)).
std::size_t schwert_max_lag(std::size_t n);

/// 1% critical value of the constant-only ADF statistic, linearly interpolated
/// in 1/n over Fuller's table.
double adf_critical_value_1pct(std::size_t nobs);

/// Regression: dy_t = a + g*y_{t-1} + sum_{i<=p} c_i*dy_{t-i} + e_t, p in 0..max_lag
/// chosen by AIC on a common sample, then refit on every usable observation.
/// Requires series.size() > max_lag + 2. Throws NumericError on a singular design.
AdfResult adf_test(std::span<const double> series, std::optional<std::size_t> max_lag = std::nullopt);

}  // namespace drt
