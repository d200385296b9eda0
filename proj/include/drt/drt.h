/* C interface of the demand-responsive transit library. */
#ifndef DRT_DRT_H
#define DRT_DRT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DRT_API __declspec(dllexport)
#else
#define DRT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum drt_status {
    DRT_OK = 0,
    DRT_E_DATA = 1,     /* malformed or inconsistent input data */
    DRT_E_ARGUMENT = 2, /* bad argument or precondition */
    DRT_E_NUMERIC = 3,  /* numerical failure */
    DRT_E_CONFIG = 4,   /* config or schema violation; see drt_last_error_path */
    DRT_E_IO = 5,       /* file could not be read or written */
    DRT_E_INTERNAL = 6
} drt_status;

typedef enum drt_command {
    DRT_CMD_TRAIN = 0,
    DRT_CMD_PREDICT = 1,
    DRT_CMD_EVALUATE = 2,
    DRT_CMD_OPTIMIZE = 3,
    DRT_CMD_PIPELINE = 4
} drt_command;

typedef struct drt_config drt_config;
typedef struct drt_network drt_network;
typedef struct drt_design drt_design;

DRT_API const char* drt_version(void);
DRT_API const char* drt_schema_versions(void);

/* Message and config field path of the last failure on this thread ("" if none). */
DRT_API const char* drt_last_error(void);
DRT_API const char* drt_last_error_path(void);

/* "trace", "debug", "info", "warn", "error", "critical" or "off". Logs go to stderr. */
DRT_API drt_status drt_set_log_level(const char* level);

/* Synthetic counts, instance and config in out_dir. spec_path may be NULL for
 * the defaults; when seed_given is nonzero, seed replaces the spec's seed. */
DRT_API drt_status drt_synth(const char* spec_path, const char* out_dir, uint64_t seed, int seed_given);

DRT_API drt_status drt_config_load(const char* path, drt_config** out);
DRT_API void drt_config_free(drt_config* config);
DRT_API drt_status drt_config_set_seed(drt_config* config, uint64_t seed);
/* 0 = all hardware threads */
DRT_API drt_status drt_config_set_threads(drt_config* config, unsigned threads);
DRT_API drt_status drt_config_set_samples(drt_config* config, size_t samples);
DRT_API drt_status drt_config_set_exact_nu(drt_config* config, int exact_nu);
DRT_API drt_status drt_config_set_output(drt_config* config, const char* output_dir);

DRT_API drt_status drt_run(const drt_config* config, drt_command command);

DRT_API drt_status drt_network_load(const char* path, drt_network** out);
DRT_API void drt_network_free(drt_network* network);
DRT_API size_t drt_network_route_count(const drt_network* network);

/* Demand of n OD pairs given by demand-node indices. */
DRT_API drt_status drt_network_solve(const drt_network* network, size_t n, const int* origins,
                                     const int* destinations, const double* demand, int exact_nu,
                                     drt_design** out);

DRT_API double drt_design_objective(const drt_design* design);
DRT_API size_t drt_design_route_count(const drt_design* design);
/* Candidate route id and bus count of the i-th operated route. */
DRT_API drt_status drt_design_route(const drt_design* design, size_t i, int* route_id, int* buses);
/* snprintf-style: writes at most size bytes (NUL included), stores the full
 * length in *needed (may be NULL). */
DRT_API drt_status drt_design_describe(const drt_design* design, char* buffer, size_t size, size_t* needed);
DRT_API drt_status drt_design_json(const drt_design* design, char* buffer, size_t size, size_t* needed);
DRT_API void drt_design_free(drt_design* design);

#ifdef __cplusplus
}
#endif

#endif
