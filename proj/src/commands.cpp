#include "drt/commands.hpp"

#include <fstream>
#include <sstream>

#include "drt/error.hpp"
#include "drt/log.hpp"
#include "drt/metrics.hpp"
#include "drt/model.hpp"
#include "drt/network.hpp"
#include "drt/pipeline.hpp"
#include "json_io.hpp"

namespace drt {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    ensure_dir(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out.flush()) throw IoError("failed writing " + path.string());
}

fs::path model_path(const PipelineConfig& c, const ModelSpec& m) { return c.output / "models" / (m.name + ".json"); }

void store_model(const PipelineConfig& c, const TrainedModel& model) {
    const auto path = model_path(c, model.spec);
    ensure_dir(path.parent_path());
    save_model(path, model);
}

fs::path forecast_path(const PipelineConfig& c, const ModelSpec& m) {
    return c.output / "forecasts" / (m.name + ".csv");
}

CountTable load_data(const PipelineConfig& c) {
    c.check_inputs();
    return load_od_counts(c.data);
}

Network load_network(const PipelineConfig& c, const CountTable& data) {
    Network net(load_instance(c.instance));
    check_network_labels(net, data.labels);
    return net;
}

TrainedModel require_model(const PipelineConfig& c, const ModelSpec& m) {
    const auto path = model_path(c, m);
    if (!fs::is_regular_file(path)) throw IoError("missing model " + path.string() + " (run train first)");
    return load_model(path);
}

std::vector<NamedForecasts> load_all_forecasts(const PipelineConfig& c, const CountTable& data) {
    std::vector<NamedForecasts> out;
    for (const auto& m : c.models) {
        const auto path = forecast_path(c, m);
        if (!fs::is_regular_file(path)) throw IoError("missing forecasts " + path.string() + " (run predict first)");
        out.push_back({m.name, load_forecasts(path, data.labels)});
    }
    return out;
}

void train_all(const PipelineConfig& c, const CountTable& data) {
    for (const auto& m : c.models) {
        log().info("training {}", m.name);
        store_model(c, train_model(m, data, c.split, c.quantiles, c.threads));
    }
}

std::vector<NamedForecasts> predict_all(const PipelineConfig& c, const CountTable& data,
                                        const std::vector<TrainedModel>& models) {
    std::vector<NamedForecasts> out;
    for (const auto& model : models) {
        log().info("forecasting {}", model.spec.name);
        auto table = forecast(model, data, c.split.test, c.threads);
        const auto path = c.output / "forecasts" / (model.spec.name + ".csv");
        ensure_dir(path.parent_path());
        save_forecasts(path, table, data.labels);
        out.push_back({model.spec.name, std::move(table)});
    }
    return out;
}

void evaluate_all(const PipelineConfig& c, const CountTable& data, const std::vector<NamedForecasts>& forecasts) {
    std::vector<EvalReport> reports;
    for (const auto& f : forecasts) reports.push_back(evaluate(f.table, data, f.model));
    std::ostringstream csv;
    write_reports_csv(csv, reports, data.labels);
    write_text(c.output / "evaluation.csv", csv.str());
    write_text(c.output / "evaluation.txt", format_reports_table(reports));
}

CompareOptions compare_options(const PipelineConfig& c) {
    CompareOptions o;
    o.samples = c.samples;
    o.seed = c.seed;
    o.median_level = c.median_level;
    o.robust_level = c.robust_level;
    o.solve.exact_nu = c.exact_nu;
    o.threads = c.threads;
    return o;
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::Train: return "train";
        case Command::Predict: return "predict";
        case Command::Evaluate: return "evaluate";
        case Command::Optimize: return "optimize";
        case Command::Pipeline: return "pipeline";
    }
    return "?";
}

Command parse_command(std::string_view name) {
    for (Command c : {Command::Train, Command::Predict, Command::Evaluate, Command::Optimize, Command::Pipeline}) {
        if (to_string(c) == name) return c;
    }
    throw InvalidArgument("unknown command '" + std::string(name) + "'");
}

std::string schema_versions() { return "counts-csv 1, forecasts-csv 1, model-json 1, instance-json 1, config-json 1"; }

GaussianCopula fit_count_copula(const CountTable& data, const SplitSpec& split, std::size_t min_lags) {
    const PreparedData prepared = prepare_data(data, split, false);
    std::map<ODPair, Series> history;
    for (const auto& [pair, series] : prepared.counts) history[pair] = select_range(series, split.train);
    return GaussianCopula::fit(history, min_lags);
}

void run_synth(const SyntheticSpec& spec, const fs::path& out_dir) {
    ensure_dir(out_dir);
    const CountTable table = generate_synthetic(spec);
    save_od_counts(out_dir / "counts.csv", table);
    write_text(out_dir / "instance.json", instance_to_string(default_instance(table.labels)));

    SplitSpec split = SplitSpec::campus_preset();
    if (!(split.train.first >= spec.dates.first && split.test.last <= spec.dates.last)) {
        // fit the split to the generated range: last 7 days for testing
        const auto last = spec.dates.last.serial();
        split.test = {Date::from_serial(last - 6), spec.dates.last};
        split.train = {spec.dates.first, Date::from_serial(last - 7)};
        split.masked_dates.clear();
        try {
            split.validate();
        } catch (const InvalidArgument& e) {
            throw InvalidArgument(std::string("synthetic range too short for a train/test split: ") + e.what());
        }
    }
    json cfg;
    cfg["version"] = 1;
    cfg["data"] = "counts.csv";
    cfg["instance"] = "instance.json";
    cfg["output"] = "output";
    cfg["seed"] = spec.seed;
    cfg["split"] = split;
    cfg["models"] = {"HP", "LQR3"};
    cfg["samples"] = 100;
    cfg["lags"] = {{"date", split.test.first}, {"hours", {8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18}}};
    write_text(out_dir / "config.json", cfg.dump(2) + "\n");
    log().info("wrote synthetic data for {} locations to {}", spec.n_locations, out_dir.string());
}

void run_train(const PipelineConfig& c) {
    const CountTable data = load_data(c);
    train_all(c, data);
}

void run_predict(const PipelineConfig& c) {
    const CountTable data = load_data(c);
    std::vector<TrainedModel> models;
    for (const auto& m : c.models) models.push_back(require_model(c, m));
    predict_all(c, data, models);
}

void run_evaluate(const PipelineConfig& c) {
    const CountTable data = load_data(c);
    evaluate_all(c, data, load_all_forecasts(c, data));
}

void run_optimize(const PipelineConfig& c) {
    const CountTable data = load_data(c);
    const Network net = load_network(c, data);
    const auto forecasts = load_all_forecasts(c, data);
    const GaussianCopula copula = fit_count_copula(data, c.split, c.copula_min_lags);
    const SolveOptions opts{c.exact_nu};
    for (const auto& f : forecasts) {
        std::ostringstream out;
        out << "timestamp,rank,allocation,count,mean_objective,mean_time_savings,chosen_expected\n";
        for (const HourStamp lag : c.lags) {
            log().info("optimizing {} at {}", f.model, lag.str());
            const auto res = optimize_lag(copula, forecasts_at(f.table, lag), net, c.samples, lag_seed(c.seed, lag),
                                          opts, c.threads);
            for (std::size_t i = 0; i < res.histogram.size(); ++i) {
                const auto& h = res.histogram[i];
                out << lag.str() << ',' << i + 1 << ',' << net.describe(h.key) << ',' << h.count << ','
                    << format_double(h.mean_objective) << ',' << format_double(res.mean_time_savings) << ','
                    << format_double(res.chosen_expected) << '\n';
            }
        }
        write_text(c.output / "optimize" / (f.model + ".csv"), out.str());
    }
}

void run_pipeline(const PipelineConfig& c) {
    const CountTable data = load_data(c);
    const Network net = load_network(c, data);

    std::vector<TrainedModel> models;
    for (const auto& m : c.models) {
        log().info("training {}", m.name);
        models.push_back(train_model(m, data, c.split, c.quantiles, c.threads));
        store_model(c, models.back());
    }
    const auto forecasts = predict_all(c, data, models);
    evaluate_all(c, data, forecasts);

    const GaussianCopula copula = fit_count_copula(data, c.split, c.copula_min_lags);
    std::ostringstream corr;
    write_correlation_csv(corr, copula, data.labels);
    write_text(c.output / "correlation.csv", corr.str());

    log().info("comparing strategies over {} lags", c.lags.size());
    const auto rows = compare_strategies(c.lags, forecasts, data, copula, net, compare_options(c));
    std::ostringstream comparison, histogram, savings;
    write_comparison_csv(comparison, rows, net);
    write_histogram_csv(histogram, rows, net);
    write_savings_csv(savings, rows);
    write_text(c.output / "comparison.csv", comparison.str());
    write_text(c.output / "histogram.csv", histogram.str());
    write_text(c.output / "savings.csv", savings.str());
    write_text(c.output / "occurrences.txt", format_occurrence_table(rows, net));
    write_text(c.output / "strategies.txt", format_strategy_table(rows, net));
}

void run_command(const PipelineConfig& c, Command command) {
    switch (command) {
        case Command::Train: run_train(c); break;
        case Command::Predict: run_predict(c); break;
        case Command::Evaluate: run_evaluate(c); break;
        case Command::Optimize: run_optimize(c); break;
        case Command::Pipeline: run_pipeline(c); break;
    }
}

}  // namespace drt
