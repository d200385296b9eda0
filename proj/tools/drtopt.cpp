// Command-line front end; talks to the library through the C API only.
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "drt/drt.h"

namespace {

int report(drt_status s) {
    if (s == DRT_OK) return 0;
    const std::string path = drt_last_error_path();
    std::fprintf(stderr, "drtopt: error: %s\n", drt_last_error());
    if (!path.empty() && std::string(drt_last_error()).rfind(path, 0) != 0) {
        std::fprintf(stderr, "drtopt: at %s\n", path.c_str());
    }
    return 10 + static_cast<int>(s);
}

struct Globals {
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    std::string log_level = "info";
};

struct RunArgs {
    std::string config;
    bool exact_nu = false;
    std::optional<std::size_t> samples;
    std::optional<std::string> output;
};

int run(const Globals& g, const RunArgs& a, drt_command cmd) {
    drt_config* cfg = nullptr;
    if (const int rc = report(drt_config_load(a.config.c_str(), &cfg))) return rc;
    drt_status s = DRT_OK;
    if (s == DRT_OK && g.seed) s = drt_config_set_seed(cfg, *g.seed);
    if (s == DRT_OK && g.threads) s = drt_config_set_threads(cfg, *g.threads);
    if (s == DRT_OK && a.samples) s = drt_config_set_samples(cfg, *a.samples);
    if (s == DRT_OK && a.exact_nu) s = drt_config_set_exact_nu(cfg, 1);
    if (s == DRT_OK && a.output) s = drt_config_set_output(cfg, a.output->c_str());
    if (s == DRT_OK) s = drt_run(cfg, cmd);
    drt_config_free(cfg);
    return report(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Demand-responsive transit: demand forecasting and route design"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
    app.add_option("--seed", g.seed, "override the configured seed");
    app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|critical|off")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));
    app.set_version_flag("--version", std::string("drtopt ") + drt_version() + "\nschemas: " + drt_schema_versions());

    std::string spec_path, out_dir;
    auto* synth = app.add_subcommand("synth", "generate synthetic counts, an instance and a config");
    synth->add_option("--spec", spec_path, "synthetic spec JSON (defaults when omitted)")->check(CLI::ExistingFile);
    synth->add_option("--out", out_dir, "output directory")->required();
    std::optional<std::uint64_t> synth_seed;
    synth->add_option("--seed", synth_seed, "generator seed");

    struct Cmd {
        const char* name;
        const char* help;
        drt_command code;
    };
    const Cmd cmds[] = {{"train", "fit and save every configured model", DRT_CMD_TRAIN},
                        {"predict", "write test-range forecasts of trained models", DRT_CMD_PREDICT},
                        {"evaluate", "score forecasts (MTL, ICP, MIL, #cross)", DRT_CMD_EVALUATE},
                        {"optimize", "sample-and-solve route designs for the configured lags", DRT_CMD_OPTIMIZE},
                        {"pipeline", "train, predict, evaluate and compare strategies", DRT_CMD_PIPELINE}};
    RunArgs args;
    std::vector<std::pair<CLI::App*, drt_command>> runnable;
    for (const auto& c : cmds) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", args.config, "pipeline config JSON")->required();
        sub->add_flag("--exact-nu", args.exact_nu, "operate exactly max_routes routes");
        sub->add_option("--samples", args.samples, "demand samples per lag")->check(CLI::PositiveNumber);
        sub->add_option("--output", args.output, "output directory");
        runnable.emplace_back(sub, c.code);
    }

    CLI11_PARSE(app, argc, argv);

    if (const int rc = report(drt_set_log_level(g.log_level.c_str()))) return rc;
    if (synth->parsed()) {
        const auto seed = synth_seed ? synth_seed : g.seed;
        return report(drt_synth(spec_path.empty() ? nullptr : spec_path.c_str(), out_dir.c_str(), seed.value_or(0),
                                seed.has_value()));
    }
    for (const auto& [sub, code] : runnable) {
        if (sub->parsed()) return run(g, args, code);
    }
    return 1;
}
