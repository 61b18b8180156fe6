/*
 * Copyright 2026 The fald Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FALD_FALD_H_
#define FALD_FALD_H_

/* C interface to the FA-LD simulator. Every call returns a status code; on
 * failure fald_last_error() describes the problem for the calling thread.
 * Handles are opaque and owned by the caller. */

#include <stddef.h>
#include <stdint.h>

#if defined(FALD_BUILDING_LIBRARY)
#define FALD_API __attribute__((visibility("default")))
#else
#define FALD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fald_status {
  FALD_OK = 0,
  FALD_ERR_INVALID_ARGUMENT = 1,
  FALD_ERR_CONFIG = 2,
  FALD_ERR_NUMERIC = 3,
  FALD_ERR_UNSUPPORTED = 4,
  FALD_ERR_IO = 5,
  FALD_ERR_INTERNAL = 6
} fald_status;

typedef enum fald_scheme {
  FALD_SCHEME_FULL = 0,
  FALD_SCHEME_I = 1,  /* with replacement, by weight */
  FALD_SCHEME_II = 2  /* uniform without replacement */
} fald_scheme;

FALD_API const char* fald_last_error(void);
FALD_API const char* fald_version(void);

/* Configuration (key=value text). */
typedef struct fald_config fald_config;
FALD_API fald_status fald_config_parse(const char* text, fald_config** out);
FALD_API fald_status fald_config_load(const char* path, fald_config** out);
/* Replaces output_dir. */
FALD_API fald_status fald_config_set_output_dir(fald_config* config, const char* dir);
FALD_API void fald_config_free(fald_config* config);

/* Subcommands. exit_code receives the CLI exit code (0 on success); log
 * lines go to stdout. */
FALD_API fald_status fald_cmd_gen_data(const fald_config* config, int* exit_code);
FALD_API fald_status fald_cmd_run(const fald_config* config, int* exit_code);
FALD_API fald_status fald_cmd_sweep(const fald_config* config, int* exit_code);
FALD_API fald_status fald_cmd_bounds(const fald_config* config, int* exit_code);
FALD_API fald_status fald_cmd_privacy(const fald_config* config, int* exit_code);
FALD_API fald_status fald_cmd_plan(const fald_config* config, int* exit_code);

/* Models. */
typedef struct fald_model fald_model;
FALD_API fald_status fald_model_from_config(const fald_config* config, fald_model** out);
/* sigma is d x d row-major. */
FALD_API fald_status fald_model_gaussian(size_t n_clients, double alpha,
                                         size_t points_per_client, const double* sigma,
                                         size_t d, double tau, uint64_t seed,
                                         fald_model** out);
FALD_API void fald_model_free(fald_model* model);
FALD_API fald_status fald_model_dim(const fald_model* model, size_t* out);
FALD_API fald_status fald_model_n_clients(const fald_model* model, size_t* out);
FALD_API fald_status fald_model_client_grad(const fald_model* model, size_t client,
                                            const double* theta, double* out);

typedef struct fald_constants {
  double L;
  double m;
  double kappa;
  double gamma_het;
  double sigma_sg;
  double D;
} fald_constants;

/* theta_star (dim entries) may be NULL. */
FALD_API fald_status fald_model_constants(const fald_model* model, double theta0_radius,
                                          double q, uint64_t seed, fald_constants* out,
                                          double* theta_star);
/* Closed-form target N(mean, cov) of a Gaussian model. */
FALD_API fald_status fald_model_target(const fald_model* model, double* mean, double* cov);

/* Chains. */
typedef struct fald_run_params {
  size_t local_steps;
  double tau;
  double rho;
  double eta;
  double q;
  fald_scheme scheme;
  size_t s_devices;
  uint64_t horizon;
  uint64_t seed;
} fald_run_params;

/* out receives replications x (horizon / local_steps + 1) x dim values;
 * threads = 0 uses FALD_THREADS or the hardware concurrency. */
FALD_API fald_status fald_run_replicated(const fald_model* model, const fald_run_params* params,
                                         size_t replications, size_t threads, double* out,
                                         size_t out_len);

/* Metrics. Covariances are d x d row-major. */
FALD_API fald_status fald_w2_gaussian(size_t d, const double* mean_a, const double* cov_a,
                                      const double* mean_b, const double* cov_b, double* out);

/* Theory. */
typedef struct fald_bound_inputs {
  double L, m, kappa, D, gamma_het, sigma_sg, tau;
  size_t d, K;
  double rho;
  size_t N, S;
  fald_scheme scheme;
  double eta;
  double min_pc;
} fald_bound_inputs;

FALD_API fald_status fald_bound_full_fixed(const fald_bound_inputs* in, double k, double* out);
FALD_API fald_status fald_bound_decaying(const fald_bound_inputs* in, double k, double* out);
FALD_API fald_status fald_bound_partial(const fald_bound_inputs* in, double k, double* out);
FALD_API fald_status fald_plan_steps(const fald_bound_inputs* in, double epsilon, double* eta,
                                     uint64_t* iterations, uint64_t* rounds);
FALD_API fald_status fald_optimal_local_steps(double kappa, size_t* out);

/* Privacy. */
typedef struct fald_dp_params {
  double delta_l, q, eta, tau, rho, min_pc;
  size_t K;
  uint64_t T;
  size_t S, N;
  fald_scheme scheme;
  double delta0, delta1, delta2;
} fald_dp_params;

typedef struct fald_dp_report {
  double eta_max;
  double epsilon1;
  double epsilon_k, delta_k;
  double epsilon_tilde, delta_tilde;
  double epsilon, delta;
  double epsilon_scheme2_form;
  int delta_clamped;
} fald_dp_report;

FALD_API fald_status fald_eta_max_dp(const fald_dp_params* params, double* out);
FALD_API fald_status fald_privacy_account(const fald_dp_params* params, fald_dp_report* out);

#ifdef __cplusplus
}
#endif

#endif  /* FALD_FALD_H_ */
