// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <string>
#include <vector>

#include "drt/drt.h"
#include "temp_dir.hpp"

namespace {

// Two demand nodes 22 min apart on foot; optimum flips at 42.5 and 78.5.
const char* kCliff = R"({
  "demand_nodes": [{"label": "L1", "x": 0, "y": 0}, {"label": "L2", "x": 2200, "y": 0}],
  "bus_stops": [{"label": "S0", "x": 0, "y": 0}, {"label": "S1", "x": 2200, "y": 0}, {"label": "S2", "x": 0, "y": 950}],
  "ride_time": [[1, 2, 5], [2, 1, 0.5], [5, 0.5, 1]],
  "walk_speed": 100, "fleet_size": 2, "capacity": 1, "max_routes": 2, "max_route_stops": 3
})";

void write(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string describe(const drt_design* d) {
    size_t needed = 0;
    REQUIRE(drt_design_describe(d, nullptr, 0, &needed) == DRT_OK);
    std::string s(needed, '\0');
    REQUIRE(drt_design_describe(d, s.data(), s.size(), nullptr) == DRT_OK);
    s.pop_back();
    return s;
}

}  // namespace

TEST_CASE("version and log level") {
    CHECK(std::string(drt_version()).size() > 0);
    CHECK(std::string(drt_schema_versions()).find("model-json 1") != std::string::npos);
    CHECK(drt_set_log_level("warn") == DRT_OK);
    CHECK(drt_set_log_level("loud") != DRT_OK);
    CHECK(std::string(drt_last_error()).size() > 0);
    CHECK(drt_set_log_level(nullptr) == DRT_E_ARGUMENT);
}

TEST_CASE("network solve through handles") {
    testing::TempDir tmp;
    write(tmp.path() / "net.json", kCliff);
    drt_network* net = nullptr;
    REQUIRE(drt_network_load((tmp.path() / "net.json").c_str(), &net) == DRT_OK);
    CHECK(drt_network_route_count(net) == 8);

    const int o[] = {0};
    const int d[] = {1};
    struct Case {
        double demand;
        const char* expected;
    };
    for (const Case c : {Case{20, "0-1-0 x2"}, Case{60, "0-1-0 x1 + 1-2-1 x1"}, Case{90, "1-2-1 x2"}, Case{0, "walk"}}) {
        CAPTURE(c.demand);
        drt_design* design = nullptr;
        REQUIRE(drt_network_solve(net, 1, o, d, &c.demand, 0, &design) == DRT_OK);
        CHECK(describe(design) == c.expected);
        CHECK(drt_design_objective(design) >= 0.0);
        drt_design_free(design);
    }

    double lambda = 20;
    drt_design* design = nullptr;
    REQUIRE(drt_network_solve(net, 1, o, d, &lambda, 0, &design) == DRT_OK);
    drt_network_free(net);  // the design keeps what it needs
    CHECK(drt_design_objective(design) == doctest::Approx(360.0));
    REQUIRE(drt_design_route_count(design) == 1);
    int route = -1, buses = -1;
    CHECK(drt_design_route(design, 0, &route, &buses) == DRT_OK);
    CHECK(route == 3);
    CHECK(buses == 2);
    CHECK(drt_design_route(design, 5, &route, &buses) == DRT_E_ARGUMENT);

    char small[4];
    size_t needed = 0;
    CHECK(drt_design_json(design, small, sizeof small, &needed) == DRT_OK);
    CHECK(needed > sizeof small);
    CHECK(std::string(small).size() == 3);
    std::string json(needed, '\0');
    CHECK(drt_design_json(design, json.data(), json.size(), nullptr) == DRT_OK);
    CHECK(json.find("\"objective\"") != std::string::npos);
    drt_design_free(design);
}

TEST_CASE("error codes and paths") {
    testing::TempDir tmp;
    drt_network* net = nullptr;
    CHECK(drt_network_load((tmp.path() / "missing.json").c_str(), &net) == DRT_E_IO);
    CHECK(net == nullptr);

    write(tmp.path() / "bad.json", R"({"demand_nodes": [], "bus_stops": [], "ride_time": [], "speed": 3})");
    CHECK(drt_network_load((tmp.path() / "bad.json").c_str(), &net) == DRT_E_CONFIG);

    write(tmp.path() / "net.json", kCliff);
    REQUIRE(drt_network_load((tmp.path() / "net.json").c_str(), &net) == DRT_OK);
    const int o[] = {0, 0};
    const int d[] = {1, 1};
    const double lam[] = {1, 2};
    drt_design* design = nullptr;
    CHECK(drt_network_solve(net, 2, o, d, lam, 0, &design) == DRT_E_ARGUMENT);
    const int bad_d[] = {7};
    CHECK(drt_network_solve(net, 1, o, bad_d, lam, 0, &design) != DRT_OK);
    const double negative[] = {-1};
    CHECK(drt_network_solve(net, 1, o, d, negative, 0, &design) != DRT_OK);
    CHECK(design == nullptr);
    CHECK(drt_network_solve(nullptr, 0, nullptr, nullptr, nullptr, 0, &design) == DRT_E_ARGUMENT);
    drt_network_free(net);

    write(tmp.path() / "cfg.json", R"({"data": "c.csv", "instance": "n.json", "output": "o", "seed": 1, "samples": -2})");
    drt_config* cfg = nullptr;
    CHECK(drt_config_load((tmp.path() / "cfg.json").c_str(), &cfg) == DRT_E_CONFIG);
    CHECK(std::string(drt_last_error_path()) == "config.samples");

    write(tmp.path() / "cfg.json", R"({"data": "c.csv", "instance": "n.json", "output": "o", "seed": 1})");
    REQUIRE(drt_config_load((tmp.path() / "cfg.json").c_str(), &cfg) == DRT_OK);
    CHECK(drt_config_set_samples(cfg, 0) == DRT_E_CONFIG);
    CHECK(drt_run(cfg, DRT_CMD_TRAIN) == DRT_E_CONFIG);  // data file missing
    CHECK(std::string(drt_last_error_path()) == "config.data");
    CHECK(drt_run(cfg, static_cast<drt_command>(42)) == DRT_E_ARGUMENT);
    drt_config_free(cfg);
}

TEST_CASE("synth and pipeline through the C API") {
    testing::TempDir tmp;
    const auto spec = tmp.path() / "spec.json";
    write(spec, R"({"n_locations": 2, "seed": 5})");
    REQUIRE(drt_synth(spec.c_str(), tmp.path().c_str(), 9, 1) == DRT_OK);
    drt_config* cfg = nullptr;
    REQUIRE(drt_config_load((tmp.path() / "config.json").c_str(), &cfg) == DRT_OK);
    CHECK(drt_config_set_samples(cfg, 10) == DRT_OK);
    CHECK(drt_config_set_threads(cfg, 2) == DRT_OK);
    CHECK(drt_config_set_output(cfg, (tmp.path() / "elsewhere").c_str()) == DRT_OK);
    CHECK(drt_run(cfg, DRT_CMD_PREDICT) == DRT_E_IO);  // nothing trained yet
    CHECK(drt_run(cfg, DRT_CMD_PIPELINE) == DRT_OK);
    CHECK(std::filesystem::is_regular_file(tmp.path() / "elsewhere" / "occurrences.txt"));
    CHECK(drt_run(cfg, DRT_CMD_OPTIMIZE) == DRT_OK);
    CHECK(std::filesystem::is_regular_file(tmp.path() / "elsewhere" / "optimize" / "HP.csv"));
    drt_config_free(cfg);
    CHECK(drt_synth(nullptr, nullptr, 0, 0) == DRT_E_ARGUMENT);
}
