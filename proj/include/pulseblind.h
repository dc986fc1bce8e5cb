/* pulseblind - pulsed-blinding attack analysis for decoy-state BB84 links.
 *
 * C interface of the shared library. All state lives behind the opaque
 * pb_config handle; functions return pb_status codes and heap strings that
 * the caller releases with pb_string_free(). Error details for the calling
 * thread are available from pb_last_error().
 */

#ifndef PULSEBLIND_H
#define PULSEBLIND_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PB_BUILDING)
#define PB_API __declspec(dllexport)
#else
#define PB_API __declspec(dllimport)
#endif
#else
#define PB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pb_status {
    PB_OK = 0,
    PB_ERR_INVALID_ARG = 1,
    PB_ERR_CONFIG = 2,      /* bad configuration file, key or value */
    PB_ERR_CHECK_FAILED = 3, /* an invariant or agreement check failed */
    PB_ERR_IO = 4,
} pb_status;

/* Opaque run configuration (protocol, detector timing, blinding schedule). */
typedef struct pb_config pb_config;

PB_API const char* pb_version(void);

/* Message for the most recent failure on this thread; never NULL. */
PB_API const char* pb_last_error(void);

PB_API void pb_string_free(char* s);

/* ---- configuration ------------------------------------------------- */

/* New configuration with built-in defaults. Free with pb_config_destroy. */
PB_API pb_config* pb_config_create(void);

PB_API void pb_config_destroy(pb_config* cfg);

/* Merges a flat JSON document of known keys over the current values. */
PB_API pb_status pb_config_load_file(pb_config* cfg, const char* path);

/* Applies one key=value override; unknown keys are rejected. */
PB_API pb_status pb_config_set(pb_config* cfg, const char* key, const char* value);

/* Loads the built-in measured row for the given blinding cycle count
 * (one of 250, 300, 350, 400, 450, 500). */
PB_API pb_status pb_config_select_cycles(pb_config* cfg, int64_t cycle_count);

/* ---- analysis pipelines -------------------------------------------- */

/* Distance sweep of gains, decoy bounds and key rates as CSV. With
 * no_attack nonzero the undisturbed channel is swept instead. */
PB_API pb_status pb_sweep_csv(const pb_config* cfg, double l_start_km, double l_end_km,
                              double l_step_km, int no_attack, char** out_csv);

/* Overestimation/insecurity crossover distances as a small JSON document
 * with keys l_overestimate_km, l_insecure_km, feasible_min_km,
 * feasible_max_km; absent crossings carry the value "NONE". */
PB_API pb_status pb_crossover_json(const pb_config* cfg, double l_min_km, double l_max_km,
                                   char** out_json);

/* Monte Carlo versus closed-form agreement at the given distances.
 * all_within_4_sigma (optional) receives 1 when every gain and error
 * z-score stays within 4. */
PB_API pb_status pb_montecarlo_json(const pb_config* cfg, const double* lengths_km,
                                    size_t n_lengths, uint64_t intervals, uint64_t seed,
                                    char** out_json, int* all_within_4_sigma);

/* Reported photocurrent and alarm state per built-in blinding profile, as
 * CSV. unexpected_alarm (optional) receives 1 when any profile alarms. */
PB_API pb_status pb_monitor_csv(const pb_config* cfg, char** out_csv, int* unexpected_alarm);

/* Simulated re-run of the blinded-period and control-energy calibration.
 * round_trip_ok (optional) receives 1 when the measured blinded period
 * matches the configured one exactly. The verdict JSON is optional. */
PB_API pb_status pb_calibrate_csv(const pb_config* cfg, uint64_t seed, char** out_csv,
                                  char** out_verdict_json, int* round_trip_ok);

/* Synthesized photocurrent trace of the configured schedule as CSV. */
PB_API pb_status pb_trace_csv(const pb_config* cfg, int64_t n_groups, double sample_period_s,
                              char** out_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PULSEBLIND_H */
