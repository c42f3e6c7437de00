// Copyright 2026 The lfu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LFU_LFU_H_
#define LFU_LFU_H_

/* C interface to the lfu library. Every call returns an lfu_status; on
 * failure the message (and pipeline stage, if any) of the most recent error
 * on the calling thread is available from lfu_last_error(). Handles are
 * opaque and owned by the caller, who releases them with the matching
 * lfu_*_free function. Strings returned as const char* stay valid until the
 * owning handle is freed (or, for lfu_last_error, until the next call on the
 * same thread). */

#include <stddef.h>
#include <stdint.h>

#if defined(LFU_BUILDING_LIBRARY)
#define LFU_API __attribute__((visibility("default")))
#else
#define LFU_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lfu_status {
  LFU_OK = 0,
  LFU_ERR_INVALID_ARGUMENT = 1,
  LFU_ERR_OVERFLOW = 2,
  LFU_ERR_ANTIPODAL_INPUT = 3,
  LFU_ERR_RANGE_TOO_LARGE = 4,
  LFU_ERR_INDEX_OUT_OF_RANGE = 5,
  LFU_ERR_PARSE = 6,
  LFU_ERR_PRIME_TOO_LARGE = 7,
  LFU_ERR_INCOMPATIBLE = 8,
  LFU_ERR_AMBIGUOUS_LIFTS = 9,
  LFU_ERR_PRECONDITION_VIOLATED = 10,
  LFU_ERR_INSUFFICIENT_PAIRS = 11,
  LFU_ERR_NO_COMMON_NEIGHBORS = 12,
  LFU_ERR_HYPOTHESIS_FAILS = 13,
  LFU_ERR_NO_DENOMINATOR_IN_RANGE = 14,
  LFU_ERR_NO_QUALIFYING_SCALE = 15,
  LFU_ERR_DENSITY_COLLAPSE = 16,
  LFU_ERR_CONCENTRATION_FAILED = 17,
  LFU_ERR_VINOGRADOV_FAILED = 18,
  LFU_ERR_NO_ANCHOR = 19,
  LFU_ERR_TOO_MANY_TUPLES = 20,
  LFU_ERR_CUTOFF_TOO_LARGE = 21,
  LFU_ERR_GATE_FAILED = 22,
  LFU_ERR_IO = 23,
  LFU_ERR_CONFIG = 24,
  LFU_ERR_INTERNAL = 100
} lfu_status;

LFU_API const char* lfu_version(void);
LFU_API const char* lfu_status_name(lfu_status status);
LFU_API const char* lfu_last_error(void);
/* Pipeline stage of the last error, "" when not raised inside a stage. */
LFU_API const char* lfu_last_error_stage(void);

/* ---- multiplicative functions ---------------------------------------- */

typedef struct lfu_fn lfu_fn;

LFU_API lfu_status lfu_fn_parse(const char* text, lfu_fn** out);
/* Canonical text of the function; valid until lfu_fn_free. */
LFU_API const char* lfu_fn_text(const lfu_fn* fn);
LFU_API lfu_status lfu_fn_eval(const lfu_fn* fn, int64_t n, double* re, double* im);
/* values receives 2*len doubles (re, im interleaved) for g(start..start+len-1). */
LFU_API lfu_status lfu_fn_eval_range(const lfu_fn* fn, int64_t start, int64_t len,
                                     double* values);
LFU_API void lfu_fn_free(lfu_fn* fn);

/* ---- integer lists ------------------------------------------------------ */

typedef struct lfu_int_list lfu_int_list;

LFU_API lfu_status lfu_primes(int64_t lo, int64_t hi, lfu_int_list** out);
LFU_API size_t lfu_int_list_size(const lfu_int_list* list);
LFU_API const int64_t* lfu_int_list_data(const lfu_int_list* list);
LFU_API void lfu_int_list_free(lfu_int_list* list);

/* ---- pipeline parameters and results ---------------------------------- */

typedef struct lfu_params {
  int64_t X;
  double delta_exp; /* H = floor(X^delta_exp) */
  double eta;
  double epsilon;
  uint64_t seed;
  int workers;
  int k_tilde_override; /* 0: natural number of lift steps */
} lfu_params;

LFU_API void lfu_params_defaults(lfu_params* params);
LFU_API lfu_status lfu_params_H(const lfu_params* params, int64_t* H);

typedef struct lfu_model {
  int64_t a;
  int64_t Q;
  double T;             /* alpha_z ~ a/Q + T/z; g(n) ~ e(a n / Q) e(T log n) */
  double t_pretender;   /* -2 pi T: the matching t of the pretentious distance */
  int T_within_bound;
  int64_t P;
  int k_tilde;
  double verified_fraction;
  double correlated_fraction;
  double mean_sup;
} lfu_model;

/* out_dir may be NULL to skip artifacts. */
LFU_API lfu_status lfu_pipeline_run(const lfu_fn* fn, const lfu_params* params,
                                    const char* out_dir, lfu_model* model);
LFU_API lfu_status lfu_pipeline_resume(const char* dir, int workers, lfu_model* model);

typedef struct lfu_distance_result {
  double value;
  double value_sq;
  double argmin_t;
  int64_t q;
  int64_t index;
  int64_t prime_cutoff;
  int64_t primes;
  double t_grid_step;
  double value_sq_at_t0; /* principal character, t = 0 */
} lfu_distance_result;

LFU_API lfu_status lfu_distance(const lfu_fn* fn, double T, int64_t Q, int workers,
                                lfu_distance_result* result);

typedef struct lfu_theorem1_result {
  int gate;
  double mean_sup;
  double T;
  int64_t Q;
  int distance_computed;
  lfu_distance_result distance;
  int consistent;
} lfu_theorem1_result;

LFU_API lfu_status lfu_theorem1_check(const lfu_fn* fn, const lfu_params* params, double C,
                                      lfu_theorem1_result* result);

/* ---- run configurations ------------------------------------------------ */

typedef struct lfu_config lfu_config;
typedef struct lfu_report lfu_report;

/* Defaults; the worker count comes from LFU_WORKERS when set. */
LFU_API lfu_status lfu_config_new(lfu_config** out);
/* Applies "key = value" lines on top of the current values. */
LFU_API lfu_status lfu_config_apply(lfu_config* config, const char* text);
LFU_API lfu_status lfu_config_set(lfu_config* config, const char* key, const char* value);
/* Canonical text; valid until the next call on this config or lfu_config_free. */
LFU_API const char* lfu_config_text(lfu_config* config);
LFU_API void lfu_config_free(lfu_config* config);

/* Runs the configured stage. The report exists only on success. */
LFU_API lfu_status lfu_run(const lfu_config* config, lfu_report** out);
LFU_API const char* lfu_report_text(const lfu_report* report);
LFU_API const char* lfu_report_out_dir(const lfu_report* report);
LFU_API size_t lfu_report_file_count(const lfu_report* report);
LFU_API const char* lfu_report_file(const lfu_report* report, size_t i);
LFU_API void lfu_report_free(lfu_report* report);

#ifdef __cplusplus
}
#endif

#endif /* LFU_LFU_H_ */
