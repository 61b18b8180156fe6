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

#include "fald/fald.h"

#include <exception>
#include <iostream>
#include <memory>
#include <new>
#include <string>

#include "fald/commands.hpp"
#include "fald/config.hpp"
#include "fald/engine.hpp"
#include "fald/error.hpp"
#include "fald/metrics.hpp"
#include "fald/model.hpp"
#include "fald/privacy.hpp"
#include "fald/theory.hpp"

struct fald_config {
  fald::ExperimentConfig config;
};

struct fald_model {
  std::unique_ptr<fald::EnergyModel> model;
};

namespace {

thread_local std::string last_error;

fald_status StatusFor(fald::ErrorCode code) {
  switch (code) {
    case fald::ErrorCode::kInvalidArgument: return FALD_ERR_INVALID_ARGUMENT;
    case fald::ErrorCode::kConfig: return FALD_ERR_CONFIG;
    case fald::ErrorCode::kNumeric: return FALD_ERR_NUMERIC;
    case fald::ErrorCode::kUnsupported: return FALD_ERR_UNSUPPORTED;
    case fald::ErrorCode::kIo: return FALD_ERR_IO;
  }
  return FALD_ERR_INTERNAL;
}

template <typename F>
fald_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return FALD_OK;
  } catch (const fald::Error& e) {
    last_error = e.what();
    return StatusFor(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FALD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FALD_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return FALD_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) fald::Fail(fald::ErrorCode::kInvalidArgument, what);
}

fald::SchemeKind ToScheme(fald_scheme s) {
  switch (s) {
    case FALD_SCHEME_FULL: return fald::SchemeKind::kFull;
    case FALD_SCHEME_I: return fald::SchemeKind::kSchemeI;
    case FALD_SCHEME_II: return fald::SchemeKind::kSchemeII;
  }
  fald::Fail(fald::ErrorCode::kInvalidArgument, "unknown scheme");
}

fald::BoundInputs ToInputs(const fald_bound_inputs* in) {
  Require(in != nullptr, "bound inputs are null");
  fald::BoundInputs b;
  b.L = in->L;
  b.m = in->m;
  b.kappa = in->kappa;
  b.D = in->D;
  b.gamma_het = in->gamma_het;
  b.sigma_sg = in->sigma_sg;
  b.tau = in->tau;
  b.d = in->d;
  b.K = in->K;
  b.rho = in->rho;
  b.N = in->N;
  b.S = in->S;
  b.scheme = ToScheme(in->scheme);
  b.eta = in->eta;
  b.min_pc = in->min_pc;
  return b;
}

fald::DpParams ToDp(const fald_dp_params* in) {
  Require(in != nullptr, "privacy params are null");
  fald::DpParams p;
  p.delta_l = in->delta_l;
  p.q = in->q;
  p.eta = in->eta;
  p.tau = in->tau;
  p.rho = in->rho;
  p.min_pc = in->min_pc;
  p.K = in->K;
  p.T = in->T;
  p.S = in->S;
  p.N = in->N;
  p.scheme = ToScheme(in->scheme);
  p.delta0 = in->delta0;
  p.delta1 = in->delta1;
  p.delta2 = in->delta2;
  return p;
}

fald::Matrix ToMatrix(const double* data, std::size_t d) {
  return fald::Matrix(d, d, std::vector<double>(data, data + d * d));
}

template <typename Cmd>
fald_status RunCommand(const fald_config* config, int* exit_code, Cmd cmd) {
  return Guard([&] {
    Require(config != nullptr && exit_code != nullptr, "null argument");
    *exit_code = cmd(config->config, std::cout);
    std::cout.flush();
  });
}

}  // namespace

extern "C" {

const char* fald_last_error(void) { return last_error.c_str(); }

const char* fald_version(void) { return "1.0.0"; }

fald_status fald_config_parse(const char* text, fald_config** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = new fald_config{fald::ParseConfig(text)};
  });
}

fald_status fald_config_load(const char* path, fald_config** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new fald_config{fald::LoadConfigFile(path)};
  });
}

fald_status fald_config_set_output_dir(fald_config* config, const char* dir) {
  return Guard([&] {
    Require(config != nullptr && dir != nullptr, "null argument");
    config->config.output_dir = dir;
  });
}

void fald_config_free(fald_config* config) { delete config; }

fald_status fald_cmd_gen_data(const fald_config* c, int* e) { return RunCommand(c, e, fald::CmdGenData); }
fald_status fald_cmd_run(const fald_config* c, int* e) { return RunCommand(c, e, fald::CmdRun); }
fald_status fald_cmd_sweep(const fald_config* c, int* e) { return RunCommand(c, e, fald::CmdSweep); }
fald_status fald_cmd_bounds(const fald_config* c, int* e) { return RunCommand(c, e, fald::CmdBounds); }
fald_status fald_cmd_privacy(const fald_config* c, int* e) { return RunCommand(c, e, fald::CmdPrivacy); }
fald_status fald_cmd_plan(const fald_config* c, int* e) { return RunCommand(c, e, fald::CmdPlan); }

fald_status fald_model_from_config(const fald_config* config, fald_model** out) {
  return Guard([&] {
    Require(config != nullptr && out != nullptr, "null argument");
    *out = new fald_model{fald::BuildModel(config->config, config->config.alpha)};
  });
}

fald_status fald_model_gaussian(size_t n_clients, double alpha, size_t points_per_client,
                                const double* sigma, size_t d, double tau, uint64_t seed,
                                fald_model** out) {
  return Guard([&] {
    Require(sigma != nullptr && out != nullptr && d > 0, "null argument");
    *out = new fald_model{fald::GenerateGaussianFederation(
        n_clients, alpha, points_per_client, ToMatrix(sigma, d), tau, seed)};
  });
}

void fald_model_free(fald_model* model) { delete model; }

fald_status fald_model_dim(const fald_model* model, size_t* out) {
  return Guard([&] {
    Require(model != nullptr && out != nullptr, "null argument");
    *out = model->model->dim();
  });
}

fald_status fald_model_n_clients(const fald_model* model, size_t* out) {
  return Guard([&] {
    Require(model != nullptr && out != nullptr, "null argument");
    *out = model->model->n_clients();
  });
}

fald_status fald_model_client_grad(const fald_model* model, size_t client, const double* theta,
                                   double* out) {
  return Guard([&] {
    Require(model != nullptr && theta != nullptr && out != nullptr, "null argument");
    const std::size_t d = model->model->dim();
    model->model->ClientGrad(client, std::span<const double>(theta, d), std::span<double>(out, d));
  });
}

fald_status fald_model_constants(const fald_model* model, double theta0_radius, double q,
                                 uint64_t seed, fald_constants* out, double* theta_star) {
  return Guard([&] {
    Require(model != nullptr && out != nullptr, "null argument");
    fald::ConstantsOptions opts;
    opts.subsample_ratio = q;
    opts.seed = seed;
    const fald::EnergyConstants k = model->model->Constants(theta0_radius, opts);
    *out = {k.L, k.m, k.kappa, k.gamma_het, k.sigma_sg, k.D};
    if (theta_star != nullptr) std::copy(k.theta_star.begin(), k.theta_star.end(), theta_star);
  });
}

fald_status fald_model_target(const fald_model* model, double* mean, double* cov) {
  return Guard([&] {
    Require(model != nullptr && mean != nullptr && cov != nullptr, "null argument");
    const fald::GaussianSummary t = fald::TargetPosterior(*model->model);
    std::copy(t.mean.begin(), t.mean.end(), mean);
    std::copy(t.cov.data().begin(), t.cov.data().end(), cov);
  });
}

fald_status fald_run_replicated(const fald_model* model, const fald_run_params* params,
                                size_t replications, size_t threads, double* out,
                                size_t out_len) {
  return Guard([&] {
    Require(model != nullptr && params != nullptr && out != nullptr, "null argument");
    fald::RunConfig run;
    run.local_steps = params->local_steps;
    run.tau = params->tau;
    run.rho = params->rho;
    run.schedule = fald::Schedule::Fixed(params->eta);
    run.scheme = {ToScheme(params->scheme), params->s_devices};
    run.subsample_ratio = params->q;
    run.horizon = params->horizon;
    run.seed = params->seed;
    fald::ValidateRunConfig(run, *model->model);
    const std::size_t need =
        replications * (run.horizon / run.local_steps + 1) * model->model->dim();
    Require(out_len >= need, "output buffer too small");
    const fald::ReplicatedRun r =
        fald::RunReplicated(run, *model->model, replications, threads);
    std::copy(r.samples.begin(), r.samples.end(), out);
  });
}

fald_status fald_w2_gaussian(size_t d, const double* mean_a, const double* cov_a,
                             const double* mean_b, const double* cov_b, double* out) {
  return Guard([&] {
    Require(mean_a && cov_a && mean_b && cov_b && out && d > 0, "null argument");
    const fald::GaussianSummary a{fald::Vector(mean_a, mean_a + d), ToMatrix(cov_a, d)};
    const fald::GaussianSummary b{fald::Vector(mean_b, mean_b + d), ToMatrix(cov_b, d)};
    *out = fald::W2Gaussian(a, b);
  });
}

fald_status fald_bound_full_fixed(const fald_bound_inputs* in, double k, double* out) {
  return Guard([&] {
    Require(out != nullptr, "null argument");
    *out = fald::BoundFullFixed(ToInputs(in), k);
  });
}

fald_status fald_bound_decaying(const fald_bound_inputs* in, double k, double* out) {
  return Guard([&] {
    Require(out != nullptr, "null argument");
    *out = fald::BoundDecaying(ToInputs(in), k);
  });
}

fald_status fald_bound_partial(const fald_bound_inputs* in, double k, double* out) {
  return Guard([&] {
    Require(out != nullptr, "null argument");
    *out = fald::BoundPartial(ToInputs(in), k);
  });
}

fald_status fald_plan_steps(const fald_bound_inputs* in, double epsilon, double* eta,
                            uint64_t* iterations, uint64_t* rounds) {
  return Guard([&] {
    Require(eta && iterations && rounds, "null argument");
    const fald::StepPlan p = fald::PlanSteps(epsilon, ToInputs(in));
    *eta = p.eta;
    *iterations = p.iterations;
    *rounds = p.rounds;
  });
}

fald_status fald_optimal_local_steps(double kappa, size_t* out) {
  return Guard([&] {
    Require(out != nullptr, "null argument");
    *out = fald::OptimalLocalSteps(kappa);
  });
}

fald_status fald_eta_max_dp(const fald_dp_params* params, double* out) {
  return Guard([&] {
    Require(out != nullptr, "null argument");
    *out = fald::EtaMaxDp(ToDp(params));
  });
}

fald_status fald_privacy_account(const fald_dp_params* params, fald_dp_report* out) {
  return Guard([&] {
    Require(out != nullptr, "null argument");
    const fald::DpReport r = fald::Account(ToDp(params));
    out->eta_max = r.eta_max;
    out->epsilon1 = r.epsilon1;
    out->epsilon_k = r.local.epsilon;
    out->delta_k = r.local.delta;
    out->epsilon_tilde = r.amplified.epsilon;
    out->delta_tilde = r.amplified.delta;
    out->epsilon = r.total.epsilon;
    out->delta = r.total.delta;
    out->epsilon_scheme2_form = r.epsilon_scheme2_form;
    out->delta_clamped = r.total.clamped ? 1 : 0;
  });
}

}  // extern "C"
