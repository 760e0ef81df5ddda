/* Copyright 2026 The qpotts Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libqpotts.
 *
 * Every fallible call returns a qp_status. On failure the message is kept per
 * thread and can be read with qp_last_error() until the next failing call.
 * Strings handed out by the library are released with qp_string_free().
 */

#ifndef QPOTTS_QPOTTS_H_
#define QPOTTS_QPOTTS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(QPOTTS_BUILDING_LIBRARY)
#define QPOTTS_API __attribute__((visibility("default")))
#else
#define QPOTTS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qp_status {
  QP_OK = 0,
  QP_ERR_PARAMETER = 1,
  QP_ERR_CONFIG = 2,
  QP_ERR_NUMERIC = 3,
  QP_ERR_CAPACITY = 4,
  QP_ERR_CONVERGENCE = 5,
  QP_ERR_UNSUPPORTED = 6,
  QP_ERR_IO = 7,
  QP_ERR_NULL_ARGUMENT = 8,
  QP_ERR_INTERNAL = 9
} qp_status;

typedef struct qp_patterns qp_patterns;
typedef struct qp_trajectory qp_trajectory;
typedef struct qp_config qp_config;

QPOTTS_API const char* qp_version(void);
QPOTTS_API const char* qp_last_error(void);
QPOTTS_API const char* qp_status_name(qp_status status);
QPOTTS_API void qp_string_free(char* s);

/* Run modes, in a fixed order. */
QPOTTS_API int qp_mode_count(void);
QPOTTS_API const char* qp_mode_name(int index);

/* Random patterns, exponents uniform in {0..q-1}. */
QPOTTS_API qp_status qp_patterns_generate(int n_sites, int n_patterns, int q, uint64_t seed,
                                          qp_patterns** out);
QPOTTS_API void qp_patterns_free(qp_patterns* patterns);
QPOTTS_API qp_status qp_patterns_exponent(const qp_patterns* patterns, int site, int mu,
                                          int* out);

/* `config` holds n_sites exponents. */
QPOTTS_API qp_status qp_classical_energy(const qp_patterns* patterns, const int* config,
                                         int n_sites, double* out);
/* Writes n_patterns overlaps. */
QPOTTS_API qp_status qp_overlap(const qp_patterns* patterns, const int* config, int n_sites,
                                double* out);

/* Mean-field collective state: 5p doubles (m, x, xbar, y, ybar blocks). */
QPOTTS_API qp_status qp_meanfield_rhs(double temperature, double lambda, int p, double gamma,
                                      const double* state, double* out);
QPOTTS_API qp_status qp_meanfield_integrate(double temperature, double lambda, int p,
                                            double gamma, const double* state0, double t_end,
                                            double dt, int record_every, qp_trajectory** out);
QPOTTS_API void qp_trajectory_free(qp_trajectory* traj);
QPOTTS_API size_t qp_trajectory_size(const qp_trajectory* traj);
QPOTTS_API int qp_trajectory_width(const qp_trajectory* traj);
/* Copies record k: the time into *t and qp_trajectory_width() values into state. */
QPOTTS_API qp_status qp_trajectory_row(const qp_trajectory* traj, size_t k, double* t,
                                       double* state);

/* Experiment configuration. `mode` may be NULL, in which case the text must
 * set it. */
QPOTTS_API qp_status qp_config_parse(const char* text, const char* mode, qp_config** out);
QPOTTS_API void qp_config_free(qp_config* config);
/* One "key=value" override. */
QPOTTS_API qp_status qp_config_set(qp_config* config, const char* assignment);
QPOTTS_API qp_status qp_config_serialize(const qp_config* config, char** out);
/* Runs the experiment. *exit_code receives the process exit code (0 ok, 2
 * config, 3 numeric, 4 capacity, 1 other); *summary, if non-NULL, receives
 * the one-line summary or the diagnostic. */
QPOTTS_API qp_status qp_config_run(const qp_config* config, int* exit_code, char** summary);

#ifdef __cplusplus
}
#endif

#endif /* QPOTTS_QPOTTS_H_ */
