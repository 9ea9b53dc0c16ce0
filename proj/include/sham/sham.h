// Copyright 2026 The SHAM Authors
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

/* C interface to the SHAM solver library.
 *
 * All objects are opaque handles created and released through this API.
 * Every fallible call returns a sham_status; on failure a message for the
 * calling thread is available from sham_last_error(). Arrays are passed as
 * (pointer, length) pairs and lengths are checked against the instance
 * dimension. */

#ifndef SHAM_SHAM_H_
#define SHAM_SHAM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SHAM_BUILDING_LIBRARY)
#define SHAM_API __attribute__((visibility("default")))
#else
#define SHAM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sham_status {
  SHAM_OK = 0,
  SHAM_ERR_INVALID_INPUT = 1,
  SHAM_ERR_INVALID_CONFIG = 2,
  SHAM_ERR_NUMERICAL = 3,
  SHAM_ERR_NOT_READY = 4,
  SHAM_ERR_UNSUPPORTED_DIMENSION = 5,
  SHAM_ERR_INFEASIBLE_GRID = 6,
  SHAM_ERR_ORACLE = 7,
  SHAM_ERR_DEGENERATE = 8,
  SHAM_ERR_INVALID_DATA = 9,
  SHAM_ERR_IO = 10,
  SHAM_ERR_INTERNAL = 99
} sham_status;

typedef enum sham_schedule {
  SHAM_SCHEDULE_CHOICE1_K2 = 0,
  SHAM_SCHEDULE_CHOICE1_K1_PAPERV = 1,
  SHAM_SCHEDULE_CHOICE2 = 2,
  SHAM_SCHEDULE_SWITCHING = 3,
  /* switching when the instance has mu > 0, otherwise CHOICE1_K1_PAPERV */
  SHAM_SCHEDULE_AUTO = 4
} sham_schedule;

typedef enum sham_record_format {
  SHAM_FORMAT_CSV = 0,
  SHAM_FORMAT_JSONL = 1
} sham_record_format;

typedef enum sham_stop_reason {
  SHAM_STOP_CONVERGED = 0,
  SHAM_STOP_STAGNATED = 1,
  SHAM_STOP_BUDGET_EXHAUSTED = 2
} sham_stop_reason;

typedef struct sham_instance sham_instance;
typedef struct sham_run sham_run;

/* Solver settings. Fill with sham_options_default() and override fields. */
typedef struct sham_options {
  double beta;             /* relaxation, (0, 2); default 0.96 */
  double gamma;            /* anchor weight, [0, 1]; default 1 */
  sham_schedule schedule;  /* default SHAM_SCHEDULE_AUTO */
  double alpha0;           /* <= 0 selects 1/L_f */
  uint64_t max_iterations; /* default 100000 */
  uint64_t seed;
  uint64_t record_every;   /* default 1 */
  int stopping_enabled;    /* default 1 */
  double feas_tol;         /* default 1e-2 */
  double gap_tol;          /* default 1e-2 */
  double stagnation_tol;   /* default 1e-3 */
  uint32_t window_m;       /* default 10 */
  int record_wall_time;    /* default 0: wall_ns column is written as 0 */
} sham_options;

typedef struct sham_run_summary {
  uint64_t iterations;
  sham_stop_reason reason;
  double f_last;
  double feas_sq_last;
  double max_viol_last;
  double f_avg;            /* NaN when the average is empty */
  double feas_sq_avg;
  double grad_norm_max;    /* empirical B_f */
  double subgrad_norm_max; /* largest subgradient norm the instance's
                             oracle has produced so far (empirical B_h) */
  int64_t wall_ns;
  int outside_theory;      /* beta outside (0, 1) */
} sham_run_summary;

typedef struct sham_theory_constants {
  double B_f_emp;
  double B_h_emp;
  double c_emp;
  double rho;
  double B_sq;   /* NaN when beta is outside (0, 1) */
  double theta;
  int has_k0;
  int64_t k0;
} sham_theory_constants;

typedef struct sham_oracle_result {
  double fstar;
  double certified_tolerance;
} sham_oracle_result;

typedef void (*sham_verify_callback)(const char* suite, int passed,
                                     const char* detail, double seconds,
                                     void* user);

SHAM_API const char* sham_version(void);
SHAM_API const char* sham_last_error(void);
SHAM_API const char* sham_status_string(sham_status status);

/* Instances */
SHAM_API sham_status sham_instance_generate(size_t n, size_t m, double mu,
                                            uint64_t seed,
                                            sham_instance** out);
SHAM_API sham_status sham_instance_load(const char* path, sham_instance** out);
/* Writes the instance file and, if write_sidecar != 0, "<path>.meta.json". */
SHAM_API sham_status sham_instance_save(const sham_instance* instance,
                                        const char* path, int write_sidecar);
SHAM_API void sham_instance_free(sham_instance* instance);
SHAM_API sham_status sham_instance_info(const sham_instance* instance,
                                        size_t* n, size_t* m, double* mu,
                                        double* L_f, uint64_t* seed);
SHAM_API sham_status sham_instance_set_fstar(sham_instance* instance,
                                             double fstar);
SHAM_API sham_status sham_instance_clear_fstar(sham_instance* instance);
/* has_fstar receives 0 or 1; fstar is written only when set. */
SHAM_API sham_status sham_instance_get_fstar(const sham_instance* instance,
                                             int* has_fstar, double* fstar);
/* Any of the outputs may be NULL. */
SHAM_API sham_status sham_instance_evaluate(const sham_instance* instance,
                                            const double* x, size_t n,
                                            double* f, double* feas_sq,
                                            double* max_viol);

/* Oracles */
SHAM_API sham_status sham_oracle_baseline(const sham_instance* instance,
                                          uint64_t iterations,
                                          sham_oracle_result* result,
                                          double* xstar, size_t n);
SHAM_API sham_status sham_oracle_grid(const sham_instance* instance,
                                      const double* lo, const double* hi,
                                      size_t n, size_t points_per_axis,
                                      sham_oracle_result* result,
                                      double* xstar);

/* Solving */
SHAM_API void sham_options_default(sham_options* options);
/* x0 may be NULL (origin). Uses the instance's fstar for the gap test when
 * set; otherwise the stagnation rule applies. A numerical failure returns
 * SHAM_ERR_NUMERICAL and no run. */
SHAM_API sham_status sham_solve(const sham_instance* instance,
                                const sham_options* options, const double* x0,
                                size_t n, sham_run** out);
SHAM_API void sham_run_free(sham_run* run);
SHAM_API sham_status sham_run_summary_get(const sham_run* run,
                                          sham_run_summary* summary);
SHAM_API sham_status sham_run_final_x(const sham_run* run, double* x,
                                      size_t n);
SHAM_API sham_status sham_run_record_count(const sham_run* run,
                                           size_t* count);
SHAM_API sham_status sham_run_write_records(const sham_run* run,
                                            const char* path,
                                            sham_record_format format);
/* Estimates B_h and c by sampling (samples >= 100) and combines them with the
 * run's B_f. */
SHAM_API sham_status sham_run_theory_constants(const sham_run* run,
                                               size_t samples, uint64_t seed,
                                               sham_theory_constants* out);

/* Verification. Runs every property suite, reporting each through the
 * callback (may be NULL). all_passed receives 1 iff every suite passed.
 * betas/beta_count override the relaxation values of the distance-lemma
 * suite when beta_count > 0. */
SHAM_API sham_status sham_verify(uint64_t seed, const double* betas,
                                 size_t beta_count, int include_rate_runs,
                                 sham_verify_callback callback, void* user,
                                 int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* SHAM_SHAM_H_ */
