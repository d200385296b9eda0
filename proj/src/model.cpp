#include "drt/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "drt/error.hpp"
#include "drt/log.hpp"
#include "drt/parallel.hpp"
#include "json_io.hpp"

namespace drt {

std::string to_string(ModelFamily f) {
    switch (f) {
        case ModelFamily::HistoricalPercentiles:
            return "hp";
        case ModelFamily::LinearQR:
            return "lqr";
        case ModelFamily::GradientBoost:
            return "gboost";
    }
    return "?";
}

std::string to_string(ModelScope s) { return s == ModelScope::PerPair ? "per_pair" : "shared"; }

std::string to_string(TuneGranularity g) {
    switch (g) {
        case TuneGranularity::Common:
            return "common";
        case TuneGranularity::PerPair:
            return "per_pair";
        case TuneGranularity::PerQuantile:
            return "per_quantile";
        case TuneGranularity::PerPairAndQuantile:
            return "per_pair_and_quantile";
    }
    return "?";
}

ModelFamily parse_model_family(std::string_view s) {
    for (auto f : {ModelFamily::HistoricalPercentiles, ModelFamily::LinearQR, ModelFamily::GradientBoost}) {
        if (to_string(f) == s) {
            return f;
        }
    }
    throw ConfigError("family", "expected one of hp, lqr, gboost");
}

ModelScope parse_model_scope(std::string_view s) {
    for (auto v : {ModelScope::PerPair, ModelScope::Shared}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw ConfigError("scope", "expected per_pair or shared");
}

TuneGranularity parse_tune_granularity(std::string_view s) {
    for (auto v : {TuneGranularity::Common, TuneGranularity::PerPair, TuneGranularity::PerQuantile,
                   TuneGranularity::PerPairAndQuantile}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw ConfigError("tune", "expected common, per_pair, per_quantile or per_pair_and_quantile");
}

std::vector<std::string> ModelSpec::preset_names() {
    return {"HP", "LQR1", "LQR2", "LQR3", "LQR4", "LQR5", "LQR-Mul1", "LQR-Mul2", "GBoost", "GBoost-Mul"};
}

ModelSpec ModelSpec::preset(std::string_view name) {
    ModelSpec s;
    s.name = std::string(name);
    if (name == "HP") {
        s.family = ModelFamily::HistoricalPercentiles;
    } else if (name == "LQR1") {
        s.sort_quantiles = false;
    } else if (name == "LQR2") {
        s.sort_quantiles = false;
        s.seasonal = true;
    } else if (name == "LQR3") {
    } else if (name == "LQR4") {
        s.features.exam_flag = true;
    } else if (name == "LQR5") {
        s.features.exam_flag = true;
        s.skip_train_days = 7;
    } else if (name == "LQR-Mul1") {
        s.scope = ModelScope::Shared;
        s.features.exam_flag = true;
        s.features.od_onehot = true;
    } else if (name == "LQR-Mul2") {
        s.features.exam_flag = true;
        s.features.cross_lag_order = 1;
    } else if (name == "GBoost") {
        s.family = ModelFamily::GradientBoost;
        s.features.exam_flag = true;
        s.grid = GBoostGrid{};
    } else if (name == "GBoost-Mul") {
        s.family = ModelFamily::GradientBoost;
        s.scope = ModelScope::Shared;
        s.features.exam_flag = true;
        s.features.od_onehot = true;
        s.grid = GBoostGrid{};
    } else {
        throw ConfigError("preset", "unknown model preset '" + std::string(name) + "'");
    }
    return s;
}

PreparedData prepare_data(const CountTable& data, const SplitSpec& split, bool seasonal) {
    PreparedData out;
    for (const auto& [pair, series] : data.series) {
        out.pairs.push_back(pair);
        out.counts[pair] = to_series(mask_lags(series, split));
        Series diff = series.size() >= 2 ? mask_lags(difference(series), split) : Series{pair, {}, {}};
        out.working[pair] = std::move(diff);
    }
    if (seasonal) {
        History train;
        for (const auto& [pair, s] : out.working) {
            train[pair] = select_range(s, split.train);
        }
        out.seasonal = SeasonalStats(train);
        if (const auto n = out.seasonal->passthrough_cells(); n > 0) {
            log().warn("seasonal normalization: {} weekday/hour cells have zero spread and pass through unscaled", n);
        }
        for (auto& [pair, s] : out.working) {
            s = out.seasonal->normalize(s);
        }
    }
    return out;
}

DesignMatrix build_design(const History& working, std::span<const ODPair> pairs, const FeatureConfig& cfg,
                          const DateRange& range) {
    std::vector<std::vector<double>> rows;
    DesignMatrix d;
    std::vector<double> targets;
    for (const auto& pair : pairs) {
        const auto it = working.find(pair);
        if (it == working.end()) {
            continue;
        }
        const auto& s = it->second;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto t = s.stamps[i];
            if (!range.contains(t) || !features_available(working, t, pair, cfg)) {
                continue;
            }
            rows.push_back(build_features(working, t, pair, cfg).flatten(cfg));
            targets.push_back(s.values[i]);
            d.rows.push_back(DesignRow{pair, t});
        }
    }
    const auto p = static_cast<Eigen::Index>(feature_length(cfg, working.size()));
    d.X.resize(static_cast<Eigen::Index>(rows.size()), p);
    d.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (Eigen::Index c = 0; c < p; ++c) {
            d.X(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
        }
        d.y[static_cast<Eigen::Index>(r)] = targets[r];
    }
    return d;
}

std::vector<double> predict_linear(const std::vector<Eigen::VectorXd>& coefficients, std::span<const double> row) {
    std::vector<double> out;
    out.reserve(coefficients.size());
    const Eigen::Map<const Eigen::VectorXd> x(row.data(), static_cast<Eigen::Index>(row.size()));
    for (const auto& beta : coefficients) {
        if (beta.size() != x.size()) {
            throw InvalidArgument("feature layout mismatch: model expects " + std::to_string(beta.size()) +
                                  " features, got " + std::to_string(x.size()));
        }
        out.push_back(beta.dot(x));
    }
    return out;
}

std::vector<double> to_count_scale(std::vector<double> values, double previous_count, bool sort) {
    for (double& v : values) {
        v += previous_count;
    }
    postprocess_quantiles(values, sort);
    return values;
}

namespace {

std::vector<ODPair> scope_pairs(const TrainedModel& m, ODPair unit) {
    return unit == kSharedScope ? m.pairs : std::vector<ODPair>{unit};
}

// Tunes boosting hyperparameters per cell (unit x level) on the partition of
// the training range; returns the chosen parameters with the tree count cut
// to the early-stopped stage count.
std::map<ODPair, std::vector<GBoostParams>> tune_gboost(const TrainedModel& m, const PreparedData& prep,
                                                        const DateRange& train, unsigned threads) {
    const auto& spec = m.spec;
    const auto split = TuningSplit::from_train(train);
    const auto grid = spec.grid->points(spec.gboost);
    const auto nq = m.levels.size();
    std::vector<ODPair> units;
    for (const auto& [u, _] : m.units) {
        units.push_back(u);
    }
    struct Parts {
        DesignMatrix train, val, test;
    };
    std::vector<Parts> parts(units.size());
    for (std::size_t u = 0; u < units.size(); ++u) {
        const auto pairs = scope_pairs(m, units[u]);
        parts[u].train = build_design(prep.working, pairs, spec.features, split.opt_train);
        parts[u].val = build_design(prep.working, pairs, spec.features, split.opt_val);
        parts[u].test = build_design(prep.working, pairs, spec.features, split.opt_test);
        if (parts[u].train.X.rows() == 0 || parts[u].val.X.rows() == 0 || parts[u].test.X.rows() == 0) {
            throw DataError("hyperparameter tuning: empty tuning partition for a model scope");
        }
    }

    const std::size_t cells = units.size() * nq;
    std::vector<double> loss(grid.size() * cells);
    std::vector<std::size_t> stages(grid.size() * cells);
    parallel_for(grid.size() * cells, threads, [&](std::size_t task) {
        const auto g = task / cells;
        const auto cell = task % cells;
        const auto u = cell / nq;
        const auto qi = cell % nq;
        const auto& pt = parts[u];
        GBoostTrace trace;
        const auto model = fit_gboost(pt.train.X, pt.train.y, m.levels[qi], grid[g],
                                      GBoostValidation{&pt.val.X, &pt.val.y, spec.patience}, &trace);
        double sum = 0.0;
        for (Eigen::Index r = 0; r < pt.test.X.rows(); ++r) {
            const Eigen::RowVectorXd row = pt.test.X.row(r);
            sum += tilted_loss(m.levels[qi], pt.test.y[r],
                               model.predict({row.data(), static_cast<std::size_t>(row.size())}));
        }
        loss[task] = sum / static_cast<double>(pt.test.X.rows());
        stages[task] = trace.best_stage;
    });

    // Cells grouped by the tuning granularity; each group picks one grid point.
    auto group_of = [&](std::size_t cell) -> std::size_t {
        switch (spec.tune) {
            case TuneGranularity::Common:
                return 0;
            case TuneGranularity::PerPair:
                return cell / nq;
            case TuneGranularity::PerQuantile:
                return cell % nq;
            case TuneGranularity::PerPairAndQuantile:
                return cell;
        }
        return 0;
    };
    std::map<std::size_t, std::vector<double>> group_scores;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        auto& sc = group_scores[group_of(cell)];
        sc.resize(grid.size(), 0.0);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            sc[g] += loss[g * cells + cell];
        }
    }
    std::map<std::size_t, std::size_t> choice;
    for (const auto& [group, sc] : group_scores) {
        choice[group] = argmin_first(sc);
    }

    std::map<ODPair, std::vector<GBoostParams>> out;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const auto g = choice.at(group_of(cell));
        GBoostParams p = grid[g];
        p.n_trees = static_cast<int>(std::max<std::size_t>(1, stages[g * cells + cell]));
        out[units[cell / nq]].push_back(p);
    }
    log().info("{}: tuned {} grid points over {} cells", spec.name, grid.size(), cells);
    return out;
}

}  // namespace

TrainedModel train_model(const ModelSpec& spec, const CountTable& data, const SplitSpec& split,
                         const QuantileSet& levels, unsigned threads) {
    split.validate();
    if (data.series.empty()) {
        throw DataError("no OD series to train on");
    }
    TrainedModel m;
    m.spec = spec;
    m.levels = levels;
    m.labels = data.labels;
    m.split = split;
    for (const auto& [pair, _] : data.series) {
        m.pairs.push_back(pair);
    }
    DateRange train = split.train;
    if (spec.skip_train_days > 0) {
        train.first = Date::from_serial(train.first.serial() + spec.skip_train_days);
        if (train.last < train.first) {
            throw InvalidArgument("skip_train_days leaves no training days");
        }
    }

    if (spec.family == ModelFamily::HistoricalPercentiles) {
        std::map<ODPair, Series> counts;
        for (const auto& [pair, series] : data.series) {
            counts[pair] = select_range(to_series(mask_lags(series, split)), train);
        }
        m.hp = HPModel(counts, levels);
        return m;
    }
    if (!levels.interior()) {
        throw InvalidArgument("regression models need quantile levels strictly inside (0, 1)");
    }

    SplitSpec prep_split = split;
    prep_split.train = train;
    const PreparedData prep = prepare_data(data, prep_split, spec.seasonal);
    m.seasonal = prep.seasonal;
    if (spec.scope == ModelScope::Shared) {
        m.units[kSharedScope] = {};
    } else {
        for (const auto& pair : m.pairs) {
            m.units[pair] = {};
        }
    }

    std::vector<ODPair> units;
    for (const auto& [u, _] : m.units) {
        units.push_back(u);
    }
    std::vector<DesignMatrix> designs(units.size());
    for (std::size_t u = 0; u < units.size(); ++u) {
        designs[u] = build_design(prep.working, scope_pairs(m, units[u]), spec.features, train);
    }

    std::map<ODPair, std::vector<GBoostParams>> params;
    if (spec.family == ModelFamily::GradientBoost) {
        if (spec.grid) {
            params = tune_gboost(m, prep, train, threads);
        } else {
            for (const auto& u : units) {
                params[u] = std::vector<GBoostParams>(levels.size(), spec.gboost);
            }
        }
    }

    const auto nq = levels.size();
    for (auto& [u, unit] : m.units) {
        unit.coefficients.resize(spec.family == ModelFamily::LinearQR ? nq : 0);
        unit.converged.resize(spec.family == ModelFamily::LinearQR ? nq : 0);
        unit.ensembles.resize(spec.family == ModelFamily::GradientBoost ? nq : 0);
        if (spec.family == ModelFamily::GradientBoost) {
            unit.params = params.at(u);
        }
    }
    parallel_for(units.size() * nq, threads, [&](std::size_t task) {
        const auto u = task / nq;
        const auto qi = task % nq;
        const auto& d = designs[u];
        auto& unit = m.units.at(units[u]);
        if (spec.family == ModelFamily::LinearQR) {
            const auto fit = fit_quantile_regression(d.X, d.y, levels[qi], spec.lqr);
            unit.coefficients[qi] = fit.beta;
            unit.converged[qi] = fit.converged;
        } else {
            if (d.X.rows() == 0) {
                throw DataError("gradient boosting: no training rows for a model scope");
            }
            unit.ensembles[qi] = fit_gboost(d.X, d.y, levels[qi], unit.params[qi]);
        }
    });
    for (const auto& [u, unit] : m.units) {
        for (std::size_t qi = 0; qi < unit.converged.size(); ++qi) {
            if (!unit.converged[qi]) {
                log().warn("{}: quantile regression for q={} did not converge; using best iterate", spec.name,
                           levels[qi]);
            }
        }
    }
    return m;
}

ForecastTable forecast(const TrainedModel& model, const CountTable& data, const DateRange& range,
                       unsigned threads) {
    const PreparedData prep = prepare_data(data, model.split, false);
    History working = prep.working;
    if (model.seasonal) {
        for (auto& [pair, s] : working) {
            s = model.seasonal->normalize(s);
        }
    }
    ForecastTable table;
    std::vector<ODPair> pairs;
    for (const auto& pair : model.pairs) {
        if (!working.contains(pair)) {
            throw DataError("forecast: data lacks pair " + data.pair_label(pair));
        }
        pairs.push_back(pair);
        table[pair];
    }
    if (model.spec.family != ModelFamily::HistoricalPercentiles && working.size() != model.pairs.size()) {
        throw DataError("forecast: data pairs differ from the training pairs");
    }
    std::vector<std::vector<QuantileForecast>> out(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        const auto pair = pairs[k];
        const auto& s = prep.working.at(pair);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto t = s.stamps[i];
            if (!range.contains(t) || t.hour() < kFirstServiceHour || t.hour() > kLastServiceHour) {
                continue;
            }
            if (model.hp) {
                out[k].push_back(model.hp->predict(pair, t));
                continue;
            }
            const auto* prev = data.count_at(pair, t - 1);
            if (prev == nullptr) {
                continue;
            }
            if (!features_available(working, t, pair, model.spec.features)) {
                throw DataError("forecast: insufficient history before " + t.str());
            }
            const auto row = build_features(working, t, pair, model.spec.features).flatten(model.spec.features);
            const auto& unit = model.units.at(model.spec.scope == ModelScope::Shared ? kSharedScope : pair);
            std::vector<double> raw;
            if (model.spec.family == ModelFamily::LinearQR) {
                raw = predict_linear(unit.coefficients, row);
            } else {
                for (const auto& e : unit.ensembles) {
                    raw.push_back(e.predict(row));
                }
            }
            if (model.seasonal) {
                for (double& v : raw) {
                    v = model.seasonal->denormalize(pair, t, v);
                }
            }
            out[k].push_back(QuantileForecast{pair, t, model.levels.levels(),
                                              to_count_scale(std::move(raw), static_cast<double>(*prev),
                                                             model.spec.sort_quantiles)});
        }
    });
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        table[pairs[k]] = std::move(out[k]);
    }
    return table;
}

namespace {

json tree_to_json(const RegressionTree& t) {
    json f = json::array(), th = json::array(), l = json::array(), r = json::array(), v = json::array();
    for (const auto& n : t.nodes) {
        f.push_back(n.feature);
        th.push_back(n.threshold);
        l.push_back(n.left);
        r.push_back(n.right);
        v.push_back(n.value);
    }
    return json{{"feature", f}, {"threshold", th}, {"left", l}, {"right", r}, {"value", v}};
}

RegressionTree tree_from_json(const json& j) {
    const auto f = j.at("feature").get<std::vector<int>>();
    const auto th = j.at("threshold").get<std::vector<double>>();
    const auto l = j.at("left").get<std::vector<int>>();
    const auto r = j.at("right").get<std::vector<int>>();
    const auto v = j.at("value").get<std::vector<double>>();
    if (f.empty() || th.size() != f.size() || l.size() != f.size() || r.size() != f.size() || v.size() != f.size()) {
        throw ConfigError("trees", "inconsistent tree arrays");
    }
    RegressionTree t;
    const auto n = static_cast<int>(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] >= 0 && (l[i] <= static_cast<int>(i) || r[i] <= static_cast<int>(i) || l[i] >= n || r[i] >= n)) {
            throw ConfigError("trees", "child index out of range");
        }
        t.nodes.push_back(TreeNode{f[i], th[i], l[i], r[i], v[i]});
    }
    return t;
}

}  // namespace

std::string model_to_json(const TrainedModel& m) {
    json j;
    j["format"] = "drt-model";
    j["version"] = 1;
    j["spec"] = m.spec;
    j["levels"] = m.levels.levels();
    j["labels"] = m.labels;
    j["pairs"] = m.pairs;
    j["split"] = m.split;
    if (m.hp) {
        json buckets = json::array();
        for (const auto& [pair, cells] : m.hp->buckets()) {
            for (const auto& [cell, bucket] : cells) {
                json entries = json::array();
                for (const auto& e : bucket) {
                    entries.push_back(json::array({e.stamp, e.value}));
                }
                buckets.push_back(
                    json{{"pair", pair}, {"dow", cell.first}, {"tod", cell.second}, {"entries", entries}});
            }
        }
        j["hp"] = buckets;
    }
    if (m.seasonal) {
        json cells = json::array();
        for (const auto& [pair, cs] : m.seasonal->cells()) {
            for (const auto& [cell, mo] : cs) {
                cells.push_back(json{{"pair", pair},
                                     {"dow", cell.first},
                                     {"tod", cell.second},
                                     {"mean", mo.mean},
                                     {"std", mo.stddev},
                                     {"count", mo.count}});
            }
        }
        j["seasonal"] = cells;
    }
    json units = json::array();
    for (const auto& [scope, unit] : m.units) {
        json u{{"scope", scope}};
        json coef = json::array();
        for (const auto& b : unit.coefficients) {
            coef.push_back(std::vector<double>(b.data(), b.data() + b.size()));
        }
        u["coefficients"] = coef;
        u["converged"] = unit.converged;
        json ens = json::array();
        for (const auto& e : unit.ensembles) {
            json trees = json::array();
            for (const auto& t : e.trees) {
                trees.push_back(tree_to_json(t));
            }
            ens.push_back(json{{"q", e.q}, {"init", e.init}, {"learning_rate", e.learning_rate}, {"trees", trees}});
        }
        u["ensembles"] = ens;
        u["params"] = unit.params;
        units.push_back(u);
    }
    j["units"] = units;
    return j.dump();
}

TrainedModel model_from_json(const std::string& text) {
    const json j = parse_json(text, "model");
    if (j.value("format", "") != "drt-model") {
        throw ConfigError("format", "not a model document");
    }
    if (j.value("version", 0) != 1) {
        throw ConfigError("version", "unsupported model version");
    }
    try {
        TrainedModel m;
        m.spec = j.at("spec").get<ModelSpec>();
        m.levels = QuantileSet(j.at("levels").get<std::vector<double>>());
        m.labels = j.at("labels").get<std::vector<std::string>>();
        m.pairs = j.at("pairs").get<std::vector<ODPair>>();
        m.split = j.at("split").get<SplitSpec>();
        if (j.contains("hp")) {
            std::map<ODPair, std::map<HPModel::Cell, HPModel::Bucket>> buckets;
            for (const auto& b : j.at("hp")) {
                auto& bucket = buckets[b.at("pair").get<ODPair>()][{b.at("dow").get<int>(), b.at("tod").get<int>()}];
                for (const auto& e : b.at("entries")) {
                    bucket.push_back(HPModel::Entry{e.at(0).get<HourStamp>(), e.at(1).get<double>()});
                }
            }
            m.hp = HPModel::from_buckets(m.levels, std::move(buckets));
        }
        if (j.contains("seasonal")) {
            std::map<ODPair, std::map<SeasonalStats::Cell, SeasonalStats::Moments>> cells;
            for (const auto& c : j.at("seasonal")) {
                cells[c.at("pair").get<ODPair>()][{c.at("dow").get<int>(), c.at("tod").get<int>()}] =
                    SeasonalStats::Moments{c.at("mean").get<double>(), c.at("std").get<double>(),
                                           c.at("count").get<std::size_t>()};
            }
            m.seasonal = SeasonalStats::from_cells(std::move(cells));
        }
        const auto width = static_cast<Eigen::Index>(feature_length(m.spec.features, m.pairs.size()));
        for (const auto& u : j.at("units")) {
            UnitModel unit;
            for (const auto& c : u.at("coefficients")) {
                const auto v = c.get<std::vector<double>>();
                if (static_cast<Eigen::Index>(v.size()) != width) {
                    throw ConfigError("units.coefficients", "coefficient length does not match the feature layout");
                }
                unit.coefficients.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), width));
            }
            unit.converged = u.at("converged").get<std::vector<bool>>();
            for (const auto& e : u.at("ensembles")) {
                GBoostEnsemble ens;
                ens.q = e.at("q").get<double>();
                ens.init = e.at("init").get<double>();
                ens.learning_rate = e.at("learning_rate").get<double>();
                for (const auto& t : e.at("trees")) {
                    ens.trees.push_back(tree_from_json(t));
                }
                unit.ensembles.push_back(std::move(ens));
            }
            unit.params = u.at("params").get<std::vector<GBoostParams>>();
            m.units[u.at("scope").get<ODPair>()] = std::move(unit);
        }
        return m;
    } catch (const json::exception& e) {
        throw ConfigError("model", e.what());
    }
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << model_to_json(model) << '\n';
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace drt
