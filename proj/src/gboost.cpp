#include "drt/gboost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "drt/error.hpp"
#include "drt/quantile.hpp"

namespace drt {

void GBoostParams::validate() const {
    if (!(learning_rate == 0.0 || (learning_rate >= 1e-8 && learning_rate <= 1.0))) {
        throw InvalidArgument("gradient boosting: learning_rate must be 0 or in [1e-8, 1]");
    }
    if (max_depth < 0 || max_depth > 6) {
        throw InvalidArgument("gradient boosting: max_depth must be in 0..6");
    }
    if (n_trees < 1 || n_trees > 200) {
        throw InvalidArgument("gradient boosting: n_trees must be in 1..200");
    }
    if (max_bins < 2 || max_bins > 255) {
        throw InvalidArgument("gradient boosting: max_bins must be in 2..255");
    }
    if (min_leaf < 1) {
        throw InvalidArgument("gradient boosting: min_leaf must be positive");
    }
    if (!(subsample > 0.0 && subsample <= 1.0)) {
        throw InvalidArgument("gradient boosting: subsample must be in (0, 1]");
    }
}

double RegressionTree::predict(std::span<const double> row) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
        const auto& n = nodes[static_cast<std::size_t>(i)];
        i = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
}

int RegressionTree::depth() const {
    std::vector<int> d(nodes.size(), 0);
    int best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (n.feature >= 0) {
            d[static_cast<std::size_t>(n.left)] = d[i] + 1;
            d[static_cast<std::size_t>(n.right)] = d[i] + 1;
            best = std::max(best, d[i] + 1);
        }
    }
    return best;
}

double GBoostEnsemble::predict(std::span<const double> row) const {
    double f = init;
    for (const auto& t : trees) {
        f += learning_rate * t.predict(row);
    }
    return f;
}

namespace {

// Per-feature cut points; bin(x) = number of cuts strictly below x, so
// bin <= j  <=>  x <= cuts[j].
struct Binning {
    std::vector<std::vector<double>> cuts;
    std::vector<std::uint8_t> bins;  // feature-major: bins[f * n + i]
    std::size_t n = 0;
};

Binning make_bins(const Eigen::MatrixXd& X, int max_bins) {
    Binning b;
    b.n = static_cast<std::size_t>(X.rows());
    const auto p = static_cast<std::size_t>(X.cols());
    b.cuts.resize(p);
    b.bins.resize(p * b.n);
    std::vector<double> col(b.n);
    for (std::size_t f = 0; f < p; ++f) {
        for (std::size_t i = 0; i < b.n; ++i) {
            col[i] = X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f));
        }
        std::vector<double> uniq = col;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        auto& cuts = b.cuts[f];
        const auto nb = static_cast<std::size_t>(max_bins);
        if (uniq.size() <= nb) {
            for (std::size_t j = 0; j + 1 < uniq.size(); ++j) {
                cuts.push_back(0.5 * (uniq[j] + uniq[j + 1]));
            }
        } else {
            std::sort(col.begin(), col.end());
            for (std::size_t k = 1; k < nb; ++k) {
                const auto idx = k * b.n / nb;
                const double v = col[idx];
                // Cut between v and the next distinct value.
                const auto it = std::upper_bound(uniq.begin(), uniq.end(), v);
                if (it == uniq.end()) {
                    break;
                }
                const double cut = 0.5 * (v + *it);
                if (cuts.empty() || cut > cuts.back()) {
                    cuts.push_back(cut);
                }
            }
        }
        for (std::size_t i = 0; i < b.n; ++i) {
            const double x = X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f));
            b.bins[f * b.n + i] =
                static_cast<std::uint8_t>(std::lower_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
        }
    }
    return b;
}

double leaf_quantile(const std::vector<std::size_t>& rows, const std::vector<double>& residual, double q) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (auto i : rows) {
        v.push_back(residual[i]);
    }
    std::sort(v.begin(), v.end());
    return lower_quantile(v, q);
}

class TreeBuilder {
public:
    TreeBuilder(const Binning& bins, const std::vector<double>& grad, const std::vector<double>& residual, double q,
                const GBoostParams& p)
        : bins_(bins), grad_(grad), residual_(residual), q_(q), params_(p) {}

    RegressionTree build(std::vector<std::size_t> rows) {
        tree_.nodes.clear();
        grow(std::move(rows), 0);
        return std::move(tree_);
    }

private:
    int grow(std::vector<std::size_t> rows, int depth) {
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        int best_f = -1;
        std::size_t best_bin = 0;
        if (depth < params_.max_depth && rows.size() >= 2 * static_cast<std::size_t>(params_.min_leaf)) {
            find_split(rows, best_f, best_bin);
        }
        if (best_f < 0) {
            tree_.nodes[static_cast<std::size_t>(id)].value = leaf_quantile(rows, residual_, q_);
            return id;
        }
        std::vector<std::size_t> left, right;
        const auto* col = &bins_.bins[static_cast<std::size_t>(best_f) * bins_.n];
        for (auto i : rows) {
            (col[i] <= best_bin ? left : right).push_back(i);
        }
        rows.clear();
        rows.shrink_to_fit();
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        auto& node = tree_.nodes[static_cast<std::size_t>(id)];
        node.feature = best_f;
        node.threshold = bins_.cuts[static_cast<std::size_t>(best_f)][best_bin];
        node.left = l;
        node.right = r;
        return id;
    }

    void find_split(const std::vector<std::size_t>& rows, int& best_f, std::size_t& best_bin) const {
        double total = 0.0;
        for (auto i : rows) {
            total += grad_[i];
        }
        const double n = static_cast<double>(rows.size());
        const double base = total * total / n;
        double best_gain = 1e-12 * std::max(1.0, std::abs(base));
        std::vector<double> sum(256);
        std::vector<std::size_t> cnt(256);
        for (std::size_t f = 0; f < bins_.cuts.size(); ++f) {
            const auto nbins = bins_.cuts[f].size() + 1;
            if (nbins < 2) {
                continue;
            }
            std::fill_n(sum.begin(), nbins, 0.0);
            std::fill_n(cnt.begin(), nbins, std::size_t{0});
            const auto* col = &bins_.bins[f * bins_.n];
            for (auto i : rows) {
                sum[col[i]] += grad_[i];
                ++cnt[col[i]];
            }
            double sl = 0.0;
            std::size_t nl = 0;
            for (std::size_t j = 0; j + 1 < nbins; ++j) {
                sl += sum[j];
                nl += cnt[j];
                const std::size_t nr = rows.size() - nl;
                if (nl < static_cast<std::size_t>(params_.min_leaf) || nr < static_cast<std::size_t>(params_.min_leaf)) {
                    continue;
                }
                const double sr = total - sl;
                const double gain = sl * sl / static_cast<double>(nl) + sr * sr / static_cast<double>(nr) - base;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_f = static_cast<int>(f);
                    best_bin = j;
                }
            }
        }
    }

    const Binning& bins_;
    const std::vector<double>& grad_;
    const std::vector<double>& residual_;
    double q_;
    const GBoostParams& params_;
    RegressionTree tree_;
};

double mean_loss(double q, const Eigen::VectorXd& y, const std::vector<double>& f) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        sum += tilted_loss(q, y[i], f[static_cast<std::size_t>(i)]);
    }
    return y.size() == 0 ? 0.0 : sum / static_cast<double>(y.size());
}

}  // namespace

GBoostEnsemble fit_gboost(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double q, const GBoostParams& params,
                          const GBoostValidation& validation, GBoostTrace* trace) {
    params.validate();
    if (!(q > 0.0 && q < 1.0)) {
        throw InvalidArgument("gradient boosting: quantile level must lie in (0, 1)");
    }
    if (X.rows() != y.size() || X.rows() == 0) {
        throw InvalidArgument("gradient boosting: empty or mismatched training data");
    }
    if (!X.allFinite() || !y.allFinite()) {
        throw DataError("gradient boosting: non-finite features or targets");
    }
    const bool has_val = validation.X != nullptr && validation.y != nullptr;
    if (has_val && (validation.X->rows() != validation.y->size() || validation.X->cols() != X.cols())) {
        throw InvalidArgument("gradient boosting: validation data does not match the training layout");
    }

    const auto n = static_cast<std::size_t>(X.rows());
    GBoostEnsemble model;
    model.q = q;
    model.learning_rate = params.learning_rate;
    if (params.init == GBoostInit::Quantile) {
        std::vector<double> sorted(y.data(), y.data() + y.size());
        std::sort(sorted.begin(), sorted.end());
        model.init = lower_quantile(sorted, q);
    }

    const Binning bins = make_bins(X, params.max_bins);
    std::vector<double> f(n, model.init);
    std::vector<double> fv;
    if (has_val) {
        fv.assign(static_cast<std::size_t>(validation.X->rows()), model.init);
    }
    std::vector<double> grad(n), residual(n);
    std::mt19937_64 rng(params.seed);

    GBoostTrace local;
    GBoostTrace& tr = trace ? *trace : local;
    tr = GBoostTrace{};
    tr.train_loss.push_back(mean_loss(q, y, f));
    double best_val = std::numeric_limits<double>::infinity();
    if (has_val) {
        best_val = mean_loss(q, *validation.y, fv);
        tr.validation_loss.push_back(best_val);
    }
    std::size_t best_stage = 0;

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (int m = 0; m < params.n_trees; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] = y[static_cast<Eigen::Index>(i)] - f[i];
            grad[i] = residual[i] >= 0.0 ? q : q - 1.0;
        }
        std::vector<std::size_t> rows;
        if (params.subsample < 1.0) {
            std::bernoulli_distribution keep(params.subsample);
            for (auto i : all) {
                if (keep(rng)) {
                    rows.push_back(i);
                }
            }
            if (rows.empty()) {
                rows.push_back(all[rng() % n]);
            }
        } else {
            rows = all;
        }
        TreeBuilder builder(bins, grad, residual, q, params);
        model.trees.push_back(builder.build(std::move(rows)));
        const auto& tree = model.trees.back();
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::RowVectorXd row = X.row(static_cast<Eigen::Index>(i));
            f[i] += params.learning_rate * tree.predict({row.data(), static_cast<std::size_t>(row.size())});
        }
        tr.train_loss.push_back(mean_loss(q, y, f));
        if (has_val) {
            for (std::size_t i = 0; i < fv.size(); ++i) {
                const Eigen::RowVectorXd row = validation.X->row(static_cast<Eigen::Index>(i));
                fv[i] += params.learning_rate * tree.predict({row.data(), static_cast<std::size_t>(row.size())});
            }
            const double v = mean_loss(q, *validation.y, fv);
            tr.validation_loss.push_back(v);
            if (v < best_val) {
                best_val = v;
                best_stage = model.trees.size();
            } else if (static_cast<int>(model.trees.size() - best_stage) >= validation.patience) {
                break;
            }
        }
    }
    if (has_val) {
        model.trees.resize(best_stage);
    }
    tr.best_stage = model.trees.size();
    return model;
}

}  // namespace drt
