/* SPDX-License-Identifier: Apache-2.0
 *
 * riscf - RIS-assisted cell-free massive MIMO NOMA simulator and optimizer
 * Copyright (C) 2026 The riscf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 *
 * C interface of the riscf shared library. Every function returns a status
 * code; on failure riscf_last_error() describes the problem (thread-local).
 * Strings returned through char** are owned by the caller and released with
 * riscf_string_free(). Handles are released with their *_free function;
 * passing NULL to any *_free function is a no-op.
 */

#ifndef RISCF_H
#define RISCF_H

#include <stdint.h>

#if defined(_WIN32)
#if defined(RISCF_BUILDING_LIBRARY)
#define RISCF_API __declspec(dllexport)
#else
#define RISCF_API __declspec(dllimport)
#endif
#else
#define RISCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum riscf_status
{
    RISCF_OK = 0,
    RISCF_ERR_INVALID_ARGUMENT = 1, /* bad handle, bad value, unknown config key */
    RISCF_ERR_PARSE = 2,            /* malformed JSON or file content */
    RISCF_ERR_IO = 3,               /* file could not be read or written */
    RISCF_ERR_NUMERIC = 4,          /* numerical failure (factorisation, non-finite gradient) */
    RISCF_ERR_INTERNAL = 5
} riscf_status;

typedef enum riscf_algorithm
{
    RISCF_ALGO_QT = 0,   /* successive-QT power allocation at fixed phases */
    RISCF_ALGO_PSO = 1,  /* PSO phase design at fixed power */
    RISCF_ALGO_JOINT = 2 /* alternating power and phase optimisation */
} riscf_algorithm;

typedef struct riscf_config riscf_config;     /* system, sweep and optimizer settings */
typedef struct riscf_scenario riscf_scenario; /* one drop with its large-scale statistics */
typedef struct riscf_solution riscf_solution; /* power coefficients and RIS phases */

RISCF_API const char *riscf_version(void);
RISCF_API const char *riscf_last_error(void);
RISCF_API const char *riscf_status_string(riscf_status status);
RISCF_API void riscf_string_free(char *s);

RISCF_API riscf_status riscf_config_default(riscf_config **out);
RISCF_API riscf_status riscf_config_parse(const char *json_text, riscf_config **out);
RISCF_API riscf_status riscf_config_load(const char *path, riscf_config **out);
RISCF_API riscf_status riscf_config_to_json(const riscf_config *config, char **out_json);
/* Sets the system seed and replaces the sweep seed list by this single seed. */
RISCF_API riscf_status riscf_config_set_seed(riscf_config *config, uint64_t seed);
RISCF_API riscf_status riscf_config_set_trials(riscf_config *config, int trials);
RISCF_API void riscf_config_free(riscf_config *config);

RISCF_API riscf_status riscf_scenario_generate(const riscf_config *config, riscf_scenario **out);
RISCF_API riscf_status riscf_scenario_load(const char *path, riscf_scenario **out);
RISCF_API riscf_status riscf_scenario_save(const riscf_scenario *scenario, const char *path);
RISCF_API riscf_status riscf_scenario_dims(const riscf_scenario *scenario, int *M, int *K, int *N, int *L);
RISCF_API void riscf_scenario_free(riscf_scenario *scenario);

/* Either path may be NULL: missing phases are all zero, missing powers are the
 * equal power allocation for the scenario at those phases. */
RISCF_API riscf_status riscf_solution_load_files(const riscf_scenario *scenario, const char *eta_path,
                                                 const char *theta_path, riscf_solution **out);
RISCF_API riscf_status riscf_solution_save_files(const riscf_solution *solution, const char *eta_path,
                                                 const char *theta_path);
RISCF_API riscf_status riscf_solution_get_eta(const riscf_solution *solution, double *out, int capacity,
                                              int *count);
RISCF_API riscf_status riscf_solution_get_theta(const riscf_solution *solution, double *out, int capacity,
                                                int *count);
RISCF_API void riscf_solution_free(riscf_solution *solution);

/* Closed-form report as CSV and sum SE. With trials > 0 also the Monte Carlo
 * ergodic sum SE and its standard error (both outputs may be NULL). */
RISCF_API riscf_status riscf_evaluate(const riscf_scenario *scenario, const riscf_solution *solution, int trials,
                                      uint64_t seed, char **report_csv, double *sum_se, double *ergodic_sum_se,
                                      double *ergodic_stderr);

/* Runs one optimiser. config may be NULL (defaults); init may be NULL (equal
 * power and, for QT, zero phases; for PSO and joint the phases are seeded). */
RISCF_API riscf_status riscf_optimize(const riscf_scenario *scenario, const riscf_config *config,
                                      riscf_algorithm algorithm, const riscf_solution *init, uint64_t seed,
                                      riscf_solution **out, char **trace_csv, double *sum_se);

RISCF_API riscf_status riscf_sweep(const riscf_config *config, char **csv);

#ifdef __cplusplus
}
#endif

#endif
