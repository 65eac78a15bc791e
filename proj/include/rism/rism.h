/* C interface to the MANET simulator: DSR with or without the RISM
 * reputation IDS. All functions return a status code; on failure
 * rism_last_error() describes what went wrong on the calling thread. */
#ifndef RISM_RISM_H
#define RISM_RISM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RISM_API __declspec(dllimport)
#elif defined(RISM_BUILDING_LIBRARY)
#define RISM_API __attribute__((visibility("default")))
#else
#define RISM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rism_status {
  RISM_OK = 0,
  RISM_ERR_CONFIG = 1, /* bad key, value or config document */
  RISM_ERR_RUN = 2,    /* a simulation failed */
  RISM_ERR_ARG = 3,    /* null handle or otherwise unusable argument */
  RISM_ERR_IO = 4      /* file could not be read or written */
} rism_status;

typedef struct rism_config rism_config;
typedef struct rism_sim rism_sim;

typedef struct rism_metrics {
  uint64_t data_sent;
  uint64_t data_received;
  uint64_t control_generated;
  uint64_t warning_count;
  uint64_t drops_behavior;
  uint64_t drops_queue;
  uint64_t drops_noroute;
  uint64_t drops_linkloss;
  uint64_t in_flight;
  double pdr;
  double overhead_ratio;
  double overhead_ratio_with_ids;
} rism_metrics;

RISM_API const char* rism_last_error(void);
RISM_API const char* rism_csv_header(void);

RISM_API rism_status rism_config_new(rism_config** out);
RISM_API void rism_config_free(rism_config* cfg);
/* Applies a `key = value` document on top of the current values. */
RISM_API rism_status rism_config_parse(rism_config* cfg, const char* text);
RISM_API rism_status rism_config_load(rism_config* cfg, const char* path);
RISM_API rism_status rism_config_set(rism_config* cfg, const char* key, const char* value);
/* Writes the full config as a document. `needed` receives the size including
 * the terminator; buf may be null to query it. */
RISM_API rism_status rism_config_to_text(const rism_config* cfg, char* buf, size_t cap, size_t* needed);

RISM_API rism_status rism_sim_new(const rism_config* cfg, uint64_t seed, const char* trace_path, rism_sim** out);
RISM_API void rism_sim_free(rism_sim* sim);
RISM_API rism_status rism_sim_run_until(rism_sim* sim, double t);
RISM_API double rism_sim_now(const rism_sim* sim);
RISM_API rism_status rism_sim_metrics(const rism_sim* sim, rism_metrics* out);

/* One complete run. trace_path may be null. */
RISM_API rism_status rism_run(const rism_config* cfg, uint64_t seed, const char* trace_path, rism_metrics* out);

/* Cross product of `axes` ("key=v1,v2,...", first outermost) times `seeds`
 * runs seeded master_seed, master_seed+1, ... CSV goes to out_csv, or to
 * stdout when it is null. threads = 0 picks the hardware concurrency. */
RISM_API rism_status rism_sweep(const rism_config* cfg, const char* const* axes, size_t n_axes, uint32_t seeds,
                                uint64_t master_seed, unsigned threads, const char* trace_prefix,
                                const char* out_csv, size_t* rows_written);

#ifdef __cplusplus
}
#endif

#endif
