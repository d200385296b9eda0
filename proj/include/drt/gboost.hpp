#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace drt {

enum class GBoostInit {
    Quantile,  ///< start from the empirical q-quantile of the targets
    Zero,
};

struct GBoostParams {
    double learning_rate = 0.1;  ///< 0 or [1e-8, 1]
    int max_depth = 3;           ///< 0..6; depth 0 grows a single root leaf
    int n_trees = 100;           ///< 1..200
    GBoostInit init = GBoostInit::Quantile;
    int max_bins = 64;   ///< histogram bins per feature, 2..255
    int min_leaf = 1;    ///< minimum rows per leaf
    double subsample = 1.0;  ///< row fraction drawn per stage, (0, 1]
    std::uint64_t seed = 0;

    /// Throws InvalidArgument when a value is out of range.
    void validate() const;
    bool operator==(const GBoostParams&) const = default;
};

struct TreeNode {
    int feature = -1;  ///< -1 marks a leaf
    double threshold = 0.0;  ///< rows with x[feature] <= threshold go left
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  ///< nodes[0] is the root

    double predict(std::span<const double> row) const;
    int depth() const;
    bool operator==(const RegressionTree&) const = default;
};

struct GBoostEnsemble {
    double q = 0.5;
    double init = 0.0;
    double learning_rate = 0.1;
    std::vector<RegressionTree> trees;

    double predict(std::span<const double> row) const;
    bool operator==(const GBoostEnsemble&) const = default;
};

/// Optional held-out rows for early stopping.
struct GBoostValidation {
    const Eigen::MatrixXd* X = nullptr;
    const Eigen::VectorXd* y = nullptr;
    int patience = 10;
};

struct GBoostTrace {
    /// Mean tilted loss after each stage; index 0 is the initial constant.
    std::vector<double> train_loss;
    std::vector<double> validation_loss;
    /// Number of trees kept.
    std::size_t best_stage = 0;
};

/// Stagewise boosting of the tilted loss: each stage fits a least-squares
/// histogram tree to the negative subgradient and sets every leaf to the
/// q-quantile of the residuals it holds. With `validation`, training stops
/// after `patience` stages without improvement and keeps the best prefix.
GBoostEnsemble fit_gboost(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double q, const GBoostParams& params,
                          const GBoostValidation& validation = {}, GBoostTrace* trace = nullptr);

}  // namespace drt
