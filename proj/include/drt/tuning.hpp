#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "drt/gboost.hpp"
#include "drt/quantile.hpp"
#include "drt/time.hpp"

namespace drt {

struct Dataset {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

/// Cartesian hyperparameter grid, enumerated learning rate major, then depth,
/// then tree count.
struct GBoostGrid {
    std::vector<double> learning_rates{0.01, 0.05, 0.1, 0.3};
    std::vector<int> max_depths{1, 2, 3, 4, 6};
    std::vector<int> n_trees{50, 100, 200};

    std::vector<GBoostParams> points(const GBoostParams& base) const;
    bool operator==(const GBoostGrid&) const = default;
};

/// Partition of a training range: the first 7 days for testing, the next 7 for
/// validation, the rest for training.
struct TuningSplit {
    DateRange opt_test;
    DateRange opt_val;
    DateRange opt_train;

    /// Throws InvalidArgument when the range is shorter than 15 days.
    static TuningSplit from_train(const DateRange& train);
};

/// Index of the smallest score; the first one on ties. Throws on empty input.
std::size_t argmin_first(std::span<const double> scores);

struct GridSearchResult {
    std::size_t best = 0;
    std::vector<double> scores;
};

/// Scores every grid index and picks argmin_first.
GridSearchResult grid_search(std::size_t n_points, const std::function<double(std::size_t)>& score);

/// Boosted quantile models trained on `train` with early stopping on `val`;
/// each point is scored by the total (over levels) mean tilted loss on `test`.
GridSearchResult grid_search_gboost(const std::vector<GBoostParams>& grid, const Dataset& train, const Dataset& val,
                                    const Dataset& test, const QuantileSet& levels, int patience = 10);

}  // namespace drt
