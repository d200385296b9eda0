#include <doctest.h>

#include <fstream>
#include <sstream>

#include "drt/commands.hpp"
#include "drt/error.hpp"
#include "drt/metrics.hpp"
#include "drt/network.hpp"
#include "temp_dir.hpp"

using namespace drt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kMinimal = R"({"data": "counts.csv", "instance": "net.json", "output": "out", "seed": 4})";

SyntheticSpec small_spec(std::uint64_t seed) {
    SyntheticSpec s;
    s.n_locations = 3;
    s.seed = seed;
    return s;
}

}  // namespace

TEST_CASE("config: defaults, relative paths, overrides") {
    const auto c = parse_config(kMinimal, "/base");
    CHECK(c.data == fs::path("/base/counts.csv"));
    CHECK(c.output == fs::path("/base/out"));
    CHECK(c.seed == 4);
    CHECK(c.samples == 100);
    CHECK(c.quantiles == QuantileSet::standard());
    CHECK(c.split == SplitSpec::campus_preset());
    REQUIRE(c.lags.size() == 11);
    CHECK(c.lags.front() == HourStamp::from(Date{2018, 1, 8}, 8));
    CHECK(c.lags.back() == HourStamp::from(Date{2018, 1, 8}, 18));
    REQUIRE(c.models.size() == 2);
    CHECK(c.models[0].name == "HP");

    const auto abs = parse_config(
        R"({"data": "/d/c.csv", "instance": "n.json", "output": "o", "seed": 1, "models": ["GBoost", {"preset": "LQR4", "name": "mine"}],
            "lags": ["2018-01-09T10", "2018-01-10T11"], "samples": 7, "exact_nu": true, "copula": {"min_lags": 5}})",
        "/x");
    CHECK(abs.data == fs::path("/d/c.csv"));
    CHECK(abs.models[1].name == "mine");
    CHECK(abs.models[1].features.exam_flag);
    CHECK(abs.lags.size() == 2);
    CHECK(abs.samples == 7);
    CHECK(abs.exact_nu);
    CHECK(abs.copula_min_lags == 5);

    const auto back = parse_config(config_to_string(abs), "/elsewhere");
    CHECK(back.data == abs.data);
    CHECK(back.models == abs.models);
    CHECK(back.lags == abs.lags);
    CHECK(back.split == abs.split);
}

TEST_CASE("config: schema violations name the field") {
    const auto path_of = [](const std::string& text) -> std::string {
        try {
            parse_config(text, "/b");
        } catch (const ConfigError& e) {
            return e.path();
        }
        return "<none>";
    };
    CHECK(path_of(R"({"data": "a", "instance": "b", "output": "c"})") == "config.seed");
    CHECK(path_of(R"({"instance": "b", "output": "c", "seed": 1})") == "config.data");
    CHECK(path_of(R"({"data": "a", "instance": "b", "output": "c", "seed": 1, "sampels": 3})") == "config.sampels");
    CHECK(path_of(R"({"data": "a", "instance": "b", "output": "c", "seed": 1, "samples": 0})") == "config.samples");
    CHECK(path_of(R"({"data": "a", "instance": "b", "output": "c", "seed": 1, "models": ["HP", "nope"]})")
              .rfind("config.models[1]", 0) == 0);
    CHECK(path_of(R"({"data": "a", "instance": "b", "output": "c", "seed": 1, "models": ["HP", "HP"]})") ==
          "config.models[1].name");
    CHECK(path_of(R"({"data": "a", "instance": "b", "output": "c", "seed": 1, "lags": ["2017-12-01T09"]})") ==
          "config.lags[0]");
    CHECK(path_of(R"({"data": "a", "instance": "b", "output": "c", "seed": 1, "lags": {"date": "2018-01-09", "hours": [25]}})") ==
          "config.lags.hours");
    CHECK(path_of(R"({"data": "a", "instance": "b", "output": "c", "seed": 1, "median_level": 0.4})") ==
          "config.median_level");
    CHECK(path_of(R"({"data": "a", "instance": "b", "output": "c", "seed": "x"})") == "config.seed");
    CHECK(path_of(R"({"data": "a", "instance": "b", "output": "c", "seed": 1, "copula": {"lags": 3}})") ==
          "config.copula.lags");
    CHECK(path_of("{not json") != "<none>");

    const auto c = parse_config(kMinimal, "/definitely/not/here");
    CHECK_THROWS_AS(c.check_inputs(), ConfigError);
    CHECK(parse_command("pipeline") == Command::Pipeline);
    CHECK_THROWS_AS(parse_command("fly"), InvalidArgument);
}

TEST_CASE("synth then pipeline emits every artifact, deterministically") {
    testing::TempDir tmp;
    run_synth(small_spec(21), tmp.path());
    for (const char* f : {"counts.csv", "instance.json", "config.json"}) CHECK(fs::is_regular_file(tmp.path() / f));

    auto cfg = load_config(tmp.path() / "config.json");
    cfg.samples = 20;
    cfg.lags.resize(3);
    run_pipeline(cfg);
    const std::vector<std::string> files{"models/HP.json",  "models/LQR3.json", "forecasts/HP.csv", "forecasts/LQR3.csv",
                                         "evaluation.csv",  "evaluation.txt",   "correlation.csv",  "comparison.csv",
                                         "histogram.csv",   "savings.csv",      "occurrences.txt",       "strategies.txt"};
    std::map<std::string, std::string> first;
    for (const auto& f : files) {
        CAPTURE(f);
        REQUIRE(fs::is_regular_file(cfg.output / f));
        first[f] = slurp(cfg.output / f);
        CHECK_FALSE(first[f].empty());
    }
    // every CSV loads back through its reader
    const auto data = load_od_counts(cfg.data);
    CHECK(load_forecasts(cfg.output / "forecasts/HP.csv", data.labels).size() == 6);
    std::istringstream corr(first["correlation.csv"]);
    CHECK(read_correlation_csv(corr, data.labels).pair_order().size() == 6);
    CHECK(load_model(cfg.output / "models/LQR3.json").spec.name == "LQR3");
    CHECK(std::count(first["comparison.csv"].begin(), first["comparison.csv"].end(), '\n') == 1 + 3 * 2);

    // rerun with more threads: byte-identical
    cfg.threads = 4;
    run_pipeline(cfg);
    for (const auto& f : files) {
        CAPTURE(f);
        CHECK(slurp(cfg.output / f) == first[f]);
    }

    // stepwise commands agree with the pipeline
    cfg.threads = 1;
    fs::remove_all(cfg.output);
    CHECK_THROWS_AS(run_predict(cfg), IoError);
    run_command(cfg, Command::Train);
    run_command(cfg, Command::Predict);
    run_command(cfg, Command::Evaluate);
    run_command(cfg, Command::Optimize);
    for (const auto& f : {"models/HP.json", "forecasts/LQR3.csv", "evaluation.csv"}) {
        CAPTURE(f);
        CHECK(slurp(cfg.output / f) == first[f]);
    }
    const std::string opt = slurp(cfg.output / "optimize/LQR3.csv");
    CHECK(opt.rfind("timestamp,rank,allocation,count", 0) == 0);
}

TEST_CASE("evaluate on perfect forecasts has zero MTL") {
    testing::TempDir tmp;
    run_synth(small_spec(3), tmp.path());
    auto cfg = load_config(tmp.path() / "config.json");
    const auto data = load_od_counts(cfg.data);
    ForecastTable perfect;
    for (const auto& [pair, series] : data.series) {
        for (const auto& o : series.observations) {
            if (!cfg.split.test.contains(o.stamp) || cfg.split.is_masked(o.stamp)) continue;
            QuantileForecast f;
            f.pair = pair;
            f.stamp = o.stamp;
            f.levels = cfg.quantiles.levels();
            f.values.assign(f.levels.size(), static_cast<double>(o.count));
            perfect[pair].push_back(f);
        }
    }
    cfg.models = {ModelSpec::preset("HP")};
    fs::create_directories(cfg.output / "forecasts");
    save_forecasts(cfg.output / "forecasts/HP.csv", perfect, data.labels);
    run_evaluate(cfg);
    const auto rows = slurp(cfg.output / "evaluation.csv");
    std::istringstream in(rows);
    std::string line;
    std::getline(in, line);
    const auto header = line;
    CHECK(header.find("mtl") != std::string::npos);
    // find the mtl column and check every row
    std::vector<std::string> cols;
    {
        std::stringstream hs(header);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    const auto mtl_col = std::find(cols.begin(), cols.end(), "mtl") - cols.begin();
    REQUIRE(mtl_col < static_cast<long>(cols.size()));
    int n = 0;
    while (std::getline(in, line) && !line.empty()) {
        std::stringstream ls(line);
        std::string cell;
        for (long i = 0; i <= mtl_col; ++i) std::getline(ls, cell, ',');
        CHECK(std::stod(cell) == 0.0);
        ++n;
    }
    CHECK(n == 6);
    std::getline(in, line);
    CHECK(line.rfind("model,total_mtl", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("HP,0,", 0) == 0);
}
