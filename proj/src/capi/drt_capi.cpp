#include "drt/drt.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "drt/commands.hpp"
#include "drt/error.hpp"
#include "drt/log.hpp"
#include "drt/network.hpp"

struct drt_config {
    drt::PipelineConfig config;
};

struct drt_network {
    std::shared_ptr<const drt::Network> network;
};

struct drt_design {
    std::shared_ptr<const drt::Network> network;
    drt::RouteDesign design;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_path;

drt_status fail(drt_status code, const std::string& what, const std::string& path = "") {
    g_error = what;
    g_error_path = path;
    return code;
}

template <class F>
drt_status guarded(F&& body) {
    g_error.clear();
    g_error_path.clear();
    try {
        body();
        return DRT_OK;
    } catch (const drt::ConfigError& e) {
        return fail(DRT_E_CONFIG, e.what(), e.path());
    } catch (const drt::DataError& e) {
        return fail(DRT_E_DATA, e.what());
    } catch (const drt::InvalidArgument& e) {
        return fail(DRT_E_ARGUMENT, e.what());
    } catch (const drt::NumericError& e) {
        return fail(DRT_E_NUMERIC, e.what());
    } catch (const drt::IoError& e) {
        return fail(DRT_E_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(DRT_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DRT_E_INTERNAL, e.what());
    } catch (...) {
        return fail(DRT_E_INTERNAL, "unknown error");
    }
}

drt_status copy_out(const std::string& text, char* buffer, size_t size, size_t* needed) {
    if (needed) *needed = text.size() + 1;
    if (buffer && size > 0) {
        const size_t n = std::min(size - 1, text.size());
        std::memcpy(buffer, text.data(), n);
        buffer[n] = '\0';
    }
    return DRT_OK;
}

}  // namespace

extern "C" {

const char* drt_version(void) { return "1.0.0"; }

const char* drt_schema_versions(void) {
    static const std::string s = drt::schema_versions();
    return s.c_str();
}

const char* drt_last_error(void) { return g_error.c_str(); }
const char* drt_last_error_path(void) { return g_error_path.c_str(); }

drt_status drt_set_log_level(const char* level) {
    if (!level) return fail(DRT_E_ARGUMENT, "level is NULL");
    return guarded([&] { drt::set_log_level(level); });
}

drt_status drt_synth(const char* spec_path, const char* out_dir, uint64_t seed, int seed_given) {
    if (!out_dir) return fail(DRT_E_ARGUMENT, "out_dir is NULL");
    return guarded([&] {
        drt::SyntheticSpec spec = spec_path ? drt::load_synthetic_spec(spec_path) : drt::SyntheticSpec{};
        if (seed_given) spec.seed = seed;
        drt::run_synth(spec, out_dir);
    });
}

drt_status drt_config_load(const char* path, drt_config** out) {
    if (!path || !out) return fail(DRT_E_ARGUMENT, "path or out is NULL");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<drt_config>();
        handle->config = drt::load_config(path);
        *out = handle.release();
    });
}

void drt_config_free(drt_config* config) { delete config; }

drt_status drt_config_set_seed(drt_config* config, uint64_t seed) {
    if (!config) return fail(DRT_E_ARGUMENT, "config is NULL");
    config->config.seed = seed;
    return DRT_OK;
}

drt_status drt_config_set_threads(drt_config* config, unsigned threads) {
    if (!config) return fail(DRT_E_ARGUMENT, "config is NULL");
    config->config.threads = threads;
    return DRT_OK;
}

drt_status drt_config_set_samples(drt_config* config, size_t samples) {
    if (!config) return fail(DRT_E_ARGUMENT, "config is NULL");
    if (samples < 1) return fail(DRT_E_CONFIG, "samples must be at least 1", "config.samples");
    config->config.samples = samples;
    return DRT_OK;
}

drt_status drt_config_set_exact_nu(drt_config* config, int exact_nu) {
    if (!config) return fail(DRT_E_ARGUMENT, "config is NULL");
    config->config.exact_nu = exact_nu != 0;
    return DRT_OK;
}

drt_status drt_config_set_output(drt_config* config, const char* output_dir) {
    if (!config || !output_dir) return fail(DRT_E_ARGUMENT, "config or output_dir is NULL");
    if (!*output_dir) return fail(DRT_E_CONFIG, "output directory is empty", "config.output");
    config->config.output = output_dir;
    return DRT_OK;
}

drt_status drt_run(const drt_config* config, drt_command command) {
    if (!config) return fail(DRT_E_ARGUMENT, "config is NULL");
    return guarded([&] {
        drt::Command c;
        switch (command) {
            case DRT_CMD_TRAIN: c = drt::Command::Train; break;
            case DRT_CMD_PREDICT: c = drt::Command::Predict; break;
            case DRT_CMD_EVALUATE: c = drt::Command::Evaluate; break;
            case DRT_CMD_OPTIMIZE: c = drt::Command::Optimize; break;
            case DRT_CMD_PIPELINE: c = drt::Command::Pipeline; break;
            default: throw drt::InvalidArgument("unknown command code " + std::to_string(int(command)));
        }
        drt::run_command(config->config, c);
    });
}

drt_status drt_network_load(const char* path, drt_network** out) {
    if (!path || !out) return fail(DRT_E_ARGUMENT, "path or out is NULL");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<drt_network>();
        handle->network = std::make_shared<const drt::Network>(drt::load_instance(path));
        *out = handle.release();
    });
}

void drt_network_free(drt_network* network) { delete network; }

size_t drt_network_route_count(const drt_network* network) {
    return network ? network->network->routes().size() : 0;
}

drt_status drt_network_solve(const drt_network* network, size_t n, const int* origins, const int* destinations,
                             const double* demand, int exact_nu, drt_design** out) {
    if (!network || !out || (n > 0 && (!origins || !destinations || !demand))) {
        return fail(DRT_E_ARGUMENT, "NULL argument");
    }
    *out = nullptr;
    return guarded([&] {
        drt::DemandVector d;
        for (size_t i = 0; i < n; ++i) {
            const drt::ODPair p{origins[i], destinations[i]};
            if (!d.emplace(p, demand[i]).second) {
                throw drt::InvalidArgument("duplicate pair " + std::to_string(p.origin) + "->" +
                                           std::to_string(p.destination));
            }
        }
        drt::SolveOptions opts;
        opts.exact_nu = exact_nu != 0;
        auto handle = std::make_unique<drt_design>();
        handle->design = network->network->solve(d, opts);
        handle->network = network->network;  // designs may outlive the network handle
        *out = handle.release();
    });
}

double drt_design_objective(const drt_design* design) { return design ? design->design.objective : 0.0; }

size_t drt_design_route_count(const drt_design* design) { return design ? design->design.routes.size() : 0; }

drt_status drt_design_route(const drt_design* design, size_t i, int* route_id, int* buses) {
    if (!design || !route_id || !buses) return fail(DRT_E_ARGUMENT, "NULL argument");
    if (i >= design->design.routes.size()) return fail(DRT_E_ARGUMENT, "route index out of range");
    *route_id = design->design.routes[i].route;
    *buses = design->design.routes[i].buses;
    return DRT_OK;
}

drt_status drt_design_describe(const drt_design* design, char* buffer, size_t size, size_t* needed) {
    if (!design) return fail(DRT_E_ARGUMENT, "design is NULL");
    return copy_out(design->network->describe(design->design.key()), buffer, size, needed);
}

drt_status drt_design_json(const drt_design* design, char* buffer, size_t size, size_t* needed) {
    if (!design) return fail(DRT_E_ARGUMENT, "design is NULL");
    std::string text;
    const drt_status s = guarded([&] { text = drt::design_to_json(*design->network, design->design); });
    if (s != DRT_OK) return s;
    return copy_out(text, buffer, size, needed);
}

void drt_design_free(drt_design* design) { delete design; }

}  // extern "C"
