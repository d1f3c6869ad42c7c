/* C interface to the advchan library. Every function returns an
 * advchan_status; on failure advchan_last_error() describes the problem.
 * Strings returned through char** are heap-allocated and must be released
 * with advchan_free_string. */
#ifndef ADVCHAN_H
#define ADVCHAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(ADVCHAN_BUILDING_LIBRARY)
#define ADVCHAN_API __attribute__((visibility("default")))
#else
#define ADVCHAN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define ADVCHAN_ABI_VERSION 1

typedef enum advchan_status {
  ADVCHAN_OK = 0,
  ADVCHAN_E_INVALID_ARG = 1,
  ADVCHAN_E_DOMAIN = 2,
  ADVCHAN_E_PARSE = 3,
  ADVCHAN_E_IO = 4,
  ADVCHAN_E_CONFIG = 5,
  ADVCHAN_E_SOLVER = 6,
  ADVCHAN_E_INVARIANT = 7,
  ADVCHAN_E_INTERNAL = 8
} advchan_status;

ADVCHAN_API int advchan_abi_version(void);
ADVCHAN_API const char* advchan_status_string(advchan_status status);
/* Message of the last failed call on this thread; "" after a success. */
ADVCHAN_API const char* advchan_last_error(void);
ADVCHAN_API void advchan_free_string(char* s);

/* ---- capacity ---- */

ADVCHAN_API advchan_status advchan_h2(double x, double* out);
ADVCHAN_API advchan_status advchan_star(double x, double y, double* out);
ADVCHAN_API advchan_status advchan_capacity_erasure(double p, double q, double* out);
ADVCHAN_API advchan_status advchan_capacity_erasure_feedback(double p, double q, double* out);

typedef enum advchan_flip_regime {
  ADVCHAN_REGIME_CONVEX = 0,
  ADVCHAN_REGIME_LINEAR = 1,
  ADVCHAN_REGIME_ZERO = 2
} advchan_flip_regime;

typedef struct advchan_flip_bound {
  double value;
  double p_bar_star;
  double alpha;
  double p0; /* NaN if the boundary could not be solved */
  advchan_flip_regime regime;
  int converged;
} advchan_flip_bound;

ADVCHAN_API advchan_status advchan_upper_bound_flip_numeric(double p, double q, double tol,
                                                            advchan_flip_bound* out);
ADVCHAN_API advchan_status advchan_upper_bound_flip_closed(double p, double q, double* out);
ADVCHAN_API advchan_status advchan_achievable_flip(double p, double q, double* out);
ADVCHAN_API advchan_status advchan_p0_equation(double p0, double q, double* out);
ADVCHAN_API advchan_status advchan_p0_solve(double q, double tol, double* p0, double* residual);

/* ---- curve tables ---- */

typedef struct advchan_curve_request {
  const char* model; /* "erasure", "erasure-fb", "flip-upper", "flip-lower" */
  const double* q_values;
  size_t num_q;
  double p_start;
  double p_stop;
  double p_step;
} advchan_curve_request;

/* CSV columns model,q,p,value,note. */
ADVCHAN_API advchan_status advchan_capacity_csv(const advchan_curve_request* request, char** out_csv);
/* CSV columns q,p0,residual,note. */
ADVCHAN_API advchan_status advchan_p0_csv(const double* q_values, size_t num_q, double tol,
                                          char** out_csv);

/* ---- chunked codes ---- */

typedef struct advchan_code advchan_code;

typedef struct advchan_code_info {
  size_t n;
  size_t num_chunks;
  size_t chunk_len;
  uint32_t num_messages;
  uint32_t num_keys;
  double theta;
  double rate;
} advchan_code_info;

ADVCHAN_API advchan_status advchan_code_build(size_t n, double theta, uint32_t num_messages,
                                              uint32_t num_keys, uint64_t seed, advchan_code** out);
ADVCHAN_API advchan_status advchan_code_from_json(const char* json, advchan_code** out);
ADVCHAN_API advchan_status advchan_code_to_json(const advchan_code* code, char** out_json);
ADVCHAN_API void advchan_code_free(advchan_code* code);
ADVCHAN_API advchan_status advchan_code_info_get(const advchan_code* code, advchan_code_info* out);
/* keys has num_chunks entries; out receives n bits as 0/1 bytes. */
ADVCHAN_API advchan_status advchan_code_encode(const advchan_code* code, uint32_t message,
                                               const uint32_t* keys, size_t num_keys, uint8_t* out,
                                               size_t out_len);

typedef enum advchan_decode_result {
  ADVCHAN_DECODED = 0,
  ADVCHAN_LIST_AMBIGUOUS = 1,
  ADVCHAN_NO_VALID_DECODING_POINT = 2
} advchan_decode_result;

typedef struct advchan_decode_outcome {
  advchan_decode_result result;
  uint32_t message; /* valid when result == ADVCHAN_DECODED */
  int has_t_star;
  size_t t_star;
  size_t list_size;
} advchan_decode_outcome;

/* Two-phase erasure decoding. y holds n symbols: 0, 1, or 2 for an erasure. */
ADVCHAN_API advchan_status advchan_decode(const advchan_code* code, const uint8_t* y, size_t n,
                                          double p, double q, advchan_decode_outcome* out);

/* ---- simulation ---- */

typedef struct advchan_scenario advchan_scenario;

/* base_dir resolves relative code file paths; may be NULL. */
ADVCHAN_API advchan_status advchan_scenario_parse(const char* json, const char* base_dir,
                                                  advchan_scenario** out);
ADVCHAN_API advchan_status advchan_scenario_load(const char* path, advchan_scenario** out);
ADVCHAN_API void advchan_scenario_free(advchan_scenario* scenario);
ADVCHAN_API advchan_status advchan_scenario_to_json(const advchan_scenario* scenario, char** out_json);

#define ADVCHAN_MAX_EVENTS 16

ADVCHAN_API size_t advchan_num_events(void);
ADVCHAN_API const char* advchan_event_name(size_t index);

typedef struct advchan_trial_outcome {
  int success;
  int verdict; /* 0 success, 1 wrong message, 2 list ambiguous, 3 no decoding point, 4 ARQ truncated */
  uint32_t sent;
  size_t channel_uses;
  size_t actions_used;
  size_t budget;
  size_t violation_attempts;
  uint8_t events[ADVCHAN_MAX_EVENTS];
} advchan_trial_outcome;

ADVCHAN_API advchan_status advchan_run_trial(const advchan_scenario* scenario, uint64_t seed,
                                             advchan_trial_outcome* out);

typedef struct advchan_error_estimate {
  uint64_t trials;
  uint64_t errors;
  double p_hat;
  double ci_low;
  double ci_high;
  double mean_channel_uses;
  uint64_t events[ADVCHAN_MAX_EVENTS];
} advchan_error_estimate;

/* threads = 0 uses ADVCHAN_THREADS or the hardware concurrency. */
ADVCHAN_API advchan_status advchan_estimate_error(const advchan_scenario* scenario, uint64_t trials,
                                                  uint64_t seed, unsigned threads,
                                                  advchan_error_estimate* out);
ADVCHAN_API advchan_status advchan_wilson_interval(uint64_t errors, uint64_t trials, double* low,
                                                   double* high);

/* One-row result table in the simulation CSV format. */
ADVCHAN_API advchan_status advchan_simulate_csv(const advchan_scenario* scenario, uint64_t trials,
                                                uint64_t seed, char** out_csv);
/* Sweep file {"schema_version":1,"base":{...},"grid":[...]}; rows from start_index on. */
ADVCHAN_API advchan_status advchan_sweep_csv(const char* sweep_path, uint64_t trials, uint64_t seed,
                                             size_t start_index, char** out_csv);
ADVCHAN_API advchan_status advchan_attack_demo(const advchan_scenario* scenario, uint64_t seed,
                                               char** out_log);

#ifdef __cplusplus
}
#endif

#endif /* ADVCHAN_H */
