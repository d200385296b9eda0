#include "drt/tuning.hpp"

#include "drt/error.hpp"

namespace drt {

std::vector<GBoostParams> GBoostGrid::points(const GBoostParams& base) const {
    std::vector<GBoostParams> out;
    for (double lr : learning_rates) {
        for (int depth : max_depths) {
            for (int trees : n_trees) {
                GBoostParams p = base;
                p.learning_rate = lr;
                p.max_depth = depth;
                p.n_trees = trees;
                out.push_back(p);
            }
        }
    }
    return out;
}

TuningSplit TuningSplit::from_train(const DateRange& train) {
    const auto first = train.first.serial();
    if (train.last.serial() - first + 1 < 15) {
        throw InvalidArgument("hyperparameter tuning needs at least 15 training days");
    }
    TuningSplit s;
    s.opt_test = DateRange{train.first, Date::from_serial(first + 6)};
    s.opt_val = DateRange{Date::from_serial(first + 7), Date::from_serial(first + 13)};
    s.opt_train = DateRange{Date::from_serial(first + 14), train.last};
    return s;
}

std::size_t argmin_first(std::span<const double> scores) {
    if (scores.empty()) {
        throw InvalidArgument("grid search over an empty grid");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] < scores[best]) {
            best = i;
        }
    }
    return best;
}

GridSearchResult grid_search(std::size_t n_points, const std::function<double(std::size_t)>& score) {
    GridSearchResult r;
    r.scores.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        r.scores.push_back(score(i));
    }
    r.best = argmin_first(r.scores);
    return r;
}

GridSearchResult grid_search_gboost(const std::vector<GBoostParams>& grid, const Dataset& train, const Dataset& val,
                                    const Dataset& test, const QuantileSet& levels, int patience) {
    return grid_search(grid.size(), [&](std::size_t i) {
        double total = 0.0;
        for (double q : levels) {
            const auto model = fit_gboost(train.X, train.y, q, grid[i], GBoostValidation{&val.X, &val.y, patience});
            double loss = 0.0;
            for (Eigen::Index r = 0; r < test.X.rows(); ++r) {
                const Eigen::RowVectorXd row = test.X.row(r);
                loss += tilted_loss(q, test.y[r], model.predict({row.data(), static_cast<std::size_t>(row.size())}));
            }
            total += test.X.rows() > 0 ? loss / static_cast<double>(test.X.rows()) : 0.0;
        }
        return total;
    });
}

}  // namespace drt
