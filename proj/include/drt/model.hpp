#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "drt/data.hpp"
#include "drt/features.hpp"
#include "drt/gboost.hpp"
#include "drt/hp.hpp"
#include "drt/lqr.hpp"
#include "drt/quantile.hpp"
#include "drt/seasonal.hpp"
#include "drt/tuning.hpp"

namespace drt {

enum class ModelFamily { HistoricalPercentiles, LinearQR, GradientBoost };
enum class ModelScope { PerPair, Shared };
/// Which cells share tuned hyperparameters.
enum class TuneGranularity { Common, PerPair, PerQuantile, PerPairAndQuantile };

std::string to_string(ModelFamily f);
std::string to_string(ModelScope s);
std::string to_string(TuneGranularity g);
ModelFamily parse_model_family(std::string_view s);
ModelScope parse_model_scope(std::string_view s);
TuneGranularity parse_tune_granularity(std::string_view s);

struct ModelSpec {
    std::string name = "LQR";
    ModelFamily family = ModelFamily::LinearQR;
    ModelScope scope = ModelScope::PerPair;
    FeatureConfig features;
    bool sort_quantiles = true;
    bool seasonal = false;
    /// Leading training days left out of fitting.
    int skip_train_days = 0;
    LqrOptions lqr;
    GBoostParams gboost;
    std::optional<GBoostGrid> grid;
    TuneGranularity tune = TuneGranularity::Common;
    int patience = 10;

    /// Named variants: HP, LQR1 (unsorted), LQR2 (seasonal), LQR3 (sorted),
    /// LQR4 (exam flag), LQR5 (no first week), LQR-Mul1 (shared, OD one-hot),
    /// LQR-Mul2 (cross lags, p=1), GBoost, GBoost-Mul.
    static ModelSpec preset(std::string_view name);
    static std::vector<std::string> preset_names();
    bool operator==(const ModelSpec&) const = default;
};

/// Scope key of a model shared by all pairs.
inline constexpr ODPair kSharedScope{-1, -1};

/// Series ready for modeling: masked counts and the masked first differences
/// (normalized per weekday/hour when requested, with training statistics).
struct PreparedData {
    std::vector<ODPair> pairs;
    std::map<ODPair, Series> counts;
    History working;
    std::optional<SeasonalStats> seasonal;
};

PreparedData prepare_data(const CountTable& data, const SplitSpec& split, bool seasonal);

struct DesignRow {
    ODPair pair;
    HourStamp stamp;
};

struct DesignMatrix {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<DesignRow> rows;
};

/// Rows for every working lag of `pairs` dated inside `range` whose features
/// are available, ordered by pair then time.
DesignMatrix build_design(const History& working, std::span<const ODPair> pairs, const FeatureConfig& cfg,
                          const DateRange& range);

/// Per-level linear predictions beta_q . row. Throws InvalidArgument on a
/// layout mismatch.
std::vector<double> predict_linear(const std::vector<Eigen::VectorXd>& coefficients, std::span<const double> row);

/// Maps working-scale quantiles to counts: add the previous observed count,
/// clip at 0, optionally sort.
std::vector<double> to_count_scale(std::vector<double> values, double previous_count, bool sort);

/// Fitted parameters of one scope (a pair, or kSharedScope), indexed by level.
struct UnitModel {
    std::vector<Eigen::VectorXd> coefficients;
    std::vector<bool> converged;
    std::vector<GBoostEnsemble> ensembles;
    std::vector<GBoostParams> params;
};

struct TrainedModel {
    ModelSpec spec;
    QuantileSet levels;
    std::vector<std::string> labels;
    std::vector<ODPair> pairs;
    SplitSpec split;
    std::optional<HPModel> hp;
    std::optional<SeasonalStats> seasonal;
    std::map<ODPair, UnitModel> units;
};

/// Fits one model per scope and level on the training range of `split`.
/// Independent fits run on up to `threads` workers; results do not depend on
/// the thread count.
TrainedModel train_model(const ModelSpec& spec, const CountTable& data, const SplitSpec& split,
                         const QuantileSet& levels, unsigned threads = 1);

/// One-step-ahead count-scale forecasts for every modeled lag dated in `range`.
/// `data` must contain the observations preceding each forecast lag.
ForecastTable forecast(const TrainedModel& model, const CountTable& data, const DateRange& range,
                       unsigned threads = 1);

/// Versioned JSON document.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace drt
