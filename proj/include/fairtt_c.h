/* Copyright 2026 The fairtt-sim Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the simulator. Handles are opaque; every call that can fail
 * returns a fairtt_status and leaves a message for fairtt_last_error() on the
 * calling thread. Strings returned by the library stay valid until the owning
 * handle is freed (or, for fairtt_last_error, until the next failing call on
 * the same thread). */

#ifndef FAIRTT_C_H_
#define FAIRTT_C_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FAIRTT_API __declspec(dllexport)
#elif defined(__GNUC__)
#define FAIRTT_API __attribute__((visibility("default")))
#else
#define FAIRTT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fairtt_status {
  FAIRTT_OK = 0,
  FAIRTT_ERR_ARGUMENT = 1,  /* null handle or bad call argument */
  FAIRTT_ERR_CONFIG = 2,    /* scenario or sweep rejected */
  FAIRTT_ERR_INVARIANT = 3, /* simulation invariant failed; message has the dump */
  FAIRTT_ERR_IO = 4,
  FAIRTT_ERR_INTERNAL = 5
} fairtt_status;

typedef struct fairtt_scenario fairtt_scenario;
typedef struct fairtt_report fairtt_report;

/* Per-run aggregates over the post-warm-up windows. has_* is 0 when the
 * metric is undefined (no traffic, or a starved class for the ratio). */
typedef struct fairtt_run_summary {
  const char* scenario;
  const char* algo;
  uint64_t seed;
  int has_fairness;
  double mean_fairness;
  double mean_utilization_pct;
  int has_ratio;
  double throughput_ratio;
  uint64_t events;
  uint64_t trace_digest;
  uint64_t coefficients_applied;
  double coefficient_min;
  double coefficient_max;
} fairtt_run_summary;

FAIRTT_API const char* fairtt_version(void);
FAIRTT_API const char* fairtt_last_error(void);

FAIRTT_API fairtt_status fairtt_scenario_load(const char* path, fairtt_scenario** out);
FAIRTT_API fairtt_status fairtt_scenario_parse(const char* text, fairtt_scenario** out);
FAIRTT_API void fairtt_scenario_free(fairtt_scenario* s);

/* One-line overview: name, algos, flows, seeds, sweep. */
FAIRTT_API const char* fairtt_scenario_describe(const fairtt_scenario* s);
/* Replaces the seed list. */
FAIRTT_API fairtt_status fairtt_scenario_set_seeds(fairtt_scenario* s, const uint64_t* seeds,
                                                   size_t count);
/* Worker threads for fairtt_run / fairtt_sweep; 0 = hardware concurrency. */
FAIRTT_API fairtt_status fairtt_scenario_set_jobs(fairtt_scenario* s, unsigned jobs);

/* Every algo x seed, over the scenario's own sweep when it declares one. */
FAIRTT_API fairtt_status fairtt_run(const fairtt_scenario* s, fairtt_report** out);
/* axis: "queue" or "rtt" (long forms accepted). values: strictly increasing. */
FAIRTT_API fairtt_status fairtt_sweep(const fairtt_scenario* s, const char* axis,
                                      const double* values, size_t count, fairtt_report** out);
FAIRTT_API void fairtt_report_free(fairtt_report* r);

FAIRTT_API size_t fairtt_report_run_count(const fairtt_report* r);
FAIRTT_API fairtt_status fairtt_report_run_summary(const fairtt_report* r, size_t index,
                                                   fairtt_run_summary* out);
/* The whole CSV document, header included. */
FAIRTT_API const char* fairtt_report_csv(const fairtt_report* r);
FAIRTT_API fairtt_status fairtt_report_write_csv(const fairtt_report* r, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* FAIRTT_C_H_ */
