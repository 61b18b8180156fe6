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

/* Exercises the extern-C surface from plain C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "fald/fald.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void TestConfig(void) {
  fald_config* cfg = NULL;
  EXPECT(fald_config_parse("n_clients=2\nk_local=1\neta=1e-4\nhorizon=4\nseed=1\n", &cfg) == FALD_OK);
  EXPECT(cfg != NULL);
  fald_config_free(cfg);

  cfg = NULL;
  EXPECT(fald_config_parse("n_clients=2\nbogus=1\n", &cfg) == FALD_ERR_CONFIG);
  EXPECT(cfg == NULL);
  EXPECT(strstr(fald_last_error(), "line 2") != NULL);
  EXPECT(fald_config_parse(NULL, &cfg) == FALD_ERR_INVALID_ARGUMENT);
  EXPECT(fald_config_load("/nonexistent/x.cfg", &cfg) == FALD_ERR_IO);
  EXPECT(strlen(fald_version()) > 0);
}

static void TestModelAndRun(void) {
  const double sigma[4] = {5, -2, -2, 1};
  fald_model* model = NULL;
  EXPECT(fald_model_gaussian(4, 1.0, 5, sigma, 2, 1.0, 7, &model) == FALD_OK);
  size_t dim = 0, n = 0;
  EXPECT(fald_model_dim(model, &dim) == FALD_OK && dim == 2);
  EXPECT(fald_model_n_clients(model, &n) == FALD_OK && n == 4);

  double theta[2] = {0.5, -0.5}, grad[2];
  EXPECT(fald_model_client_grad(model, 1, theta, grad) == FALD_OK);
  EXPECT(fald_model_client_grad(model, 9, theta, grad) == FALD_ERR_INVALID_ARGUMENT);
  theta[0] = NAN;
  EXPECT(fald_model_client_grad(model, 1, theta, grad) != FALD_OK);

  fald_constants k;
  double star[2];
  EXPECT(fald_model_constants(model, 0.0, 1.0, 1, &k, star) == FALD_OK);
  EXPECT(fabs(k.kappa - (17 + 12 * sqrt(2.0))) < 1e-9);

  double mean[2], cov[4];
  EXPECT(fald_model_target(model, mean, cov) == FALD_OK);
  EXPECT(fabs(mean[0] - star[0]) < 1e-9);

  fald_run_params p;
  memset(&p, 0, sizeof p);
  p.local_steps = 2;
  p.tau = 1.0;
  p.eta = 1e-4;
  p.q = 1.0;
  p.scheme = FALD_SCHEME_II;
  p.s_devices = 4;
  p.horizon = 10;
  p.seed = 3;
  const size_t len = 3 * 6 * 2;
  double* a = malloc(len * sizeof(double));
  double* b = malloc(len * sizeof(double));
  EXPECT(fald_run_replicated(model, &p, 3, 1, a, len) == FALD_OK);
  p.scheme = FALD_SCHEME_FULL;
  EXPECT(fald_run_replicated(model, &p, 3, 2, b, len) == FALD_OK);
  EXPECT(memcmp(a, b, len * sizeof(double)) == 0);
  EXPECT(fald_run_replicated(model, &p, 3, 1, a, len - 1) == FALD_ERR_INVALID_ARGUMENT);
  p.horizon = 11;
  EXPECT(fald_run_replicated(model, &p, 3, 1, a, len) == FALD_ERR_INVALID_ARGUMENT);
  free(a);
  free(b);
  fald_model_free(model);

  EXPECT(fald_model_gaussian(2, 1.0, 3, (const double[4]){1, 2, 2, 1}, 2, 1.0, 0, &model) ==
         FALD_ERR_INVALID_ARGUMENT);
  EXPECT(strstr(fald_last_error(), "eigenvalue") != NULL);
}

static void TestMath(void) {
  const double ma[1] = {0}, mb[1] = {1}, c[1] = {1};
  double w = -1;
  EXPECT(fald_w2_gaussian(1, ma, c, mb, c, &w) == FALD_OK);
  EXPECT(fabs(w - 1.0) < 1e-12);

  fald_bound_inputs in;
  memset(&in, 0, sizeof in);
  in.L = 2;
  in.m = 1;
  in.kappa = 2;
  in.D = 1;
  in.tau = 1;
  in.d = 2;
  in.K = 1;
  in.N = 2;
  in.S = 2;
  in.scheme = FALD_SCHEME_FULL;
  in.eta = 0.25;
  in.min_pc = 0.5;
  double b = 0;
  EXPECT(fald_bound_full_fixed(&in, 0, &b) == FALD_OK);
  EXPECT(fabs(b - 107.92304845413263761) < 1e-10);
  in.eta = 1.0;
  EXPECT(fald_bound_full_fixed(&in, 0, &b) == FALD_ERR_INVALID_ARGUMENT);

  size_t K = 0;
  EXPECT(fald_optimal_local_steps(100.0, &K) == FALD_OK && K == 10);

  fald_dp_params dp;
  memset(&dp, 0, sizeof dp);
  dp.delta_l = 1;
  dp.q = 1;
  dp.eta = 1e-4;
  dp.tau = 1;
  dp.min_pc = 0.1;
  dp.K = 1;
  dp.T = 1;
  dp.S = 1;
  dp.N = 1;
  dp.scheme = FALD_SCHEME_II;
  dp.delta0 = 1e-5;
  fald_dp_report r;
  EXPECT(fald_privacy_account(&dp, &r) == FALD_OK);
  EXPECT(fabs(r.epsilon1 - 0.2166662780986874109) < 1e-12);
  dp.q = 0.1;
  EXPECT(fald_privacy_account(&dp, &r) == FALD_ERR_INVALID_ARGUMENT);
  EXPECT(strstr(fald_last_error(), "eta_max") != NULL);
}

int main(void) {
  TestConfig();
  TestModelAndRun();
  TestMath();
  if (failures == 0) printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
