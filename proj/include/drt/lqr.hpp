#pragma once

#include <Eigen/Dense>

namespace drt {

struct LqrOptions {
    /// Relative duality gap at which the interior point iteration stops.
    double tolerance = 1e-10;
    int max_iterations = 200;

    bool operator==(const LqrOptions&) const = default;
};

struct LqrFit {
    Eigen::VectorXd beta;
    bool converged = false;
    int iterations = 0;
    /// Mean tilted loss over the training rows.
    double loss = 0.0;
};

/// Linear quantile regression: minimizes the mean tilted loss of y - X*beta.
/// Solves the dual linear program with a primal-dual interior point method and
/// snaps to the nearest basic solution when that does not increase the loss.
/// Columns that are linearly dependent on earlier ones get coefficient 0.
LqrFit fit_quantile_regression(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double q,
                               const LqrOptions& options = {});

}  // namespace drt
