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

#include "sham/sham.h"

#include "sham/experiments.hpp"
#include "sham/instance_io.hpp"
#include "sham/oracles.hpp"
#include "sham/problem.hpp"
#include "sham/solver.hpp"
#include "sham/theory.hpp"
#include "sham/verify.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <string>

struct sham_instance {
  sham::QcqpData data;
  sham::ProblemInstance problem;
};

struct sham_run {
  sham::ProblemInstance problem;
  sham::SolverConfig config;
  sham::RunResult result;
};

namespace {

thread_local std::string g_last_error;

sham_status to_status(sham::ErrorCode code) {
  using sham::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidInput: return SHAM_ERR_INVALID_INPUT;
    case ErrorCode::kInvalidConfig: return SHAM_ERR_INVALID_CONFIG;
    case ErrorCode::kNumericalFailure: return SHAM_ERR_NUMERICAL;
    case ErrorCode::kNotReady: return SHAM_ERR_NOT_READY;
    case ErrorCode::kUnsupportedDimension:
      return SHAM_ERR_UNSUPPORTED_DIMENSION;
    case ErrorCode::kInfeasibleGrid: return SHAM_ERR_INFEASIBLE_GRID;
    case ErrorCode::kOracleFailure: return SHAM_ERR_ORACLE;
    case ErrorCode::kDegenerateSample:
    case ErrorCode::kDegenerateConstant: return SHAM_ERR_DEGENERATE;
    case ErrorCode::kInvalidData: return SHAM_ERR_INVALID_DATA;
    case ErrorCode::kIo: return SHAM_ERR_IO;
  }
  return SHAM_ERR_INTERNAL;
}

sham_status fail(sham_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
sham_status guarded(Body&& body) {
  try {
    g_last_error.clear();
    body();
    return SHAM_OK;
  } catch (const sham::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SHAM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SHAM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SHAM_ERR_INTERNAL, "unknown exception");
  }
}

void require_arg(bool ok, const char* what) {
  sham::require(ok, sham::ErrorCode::kInvalidInput, what);
}

sham::Vector copy_in(const double* x, size_t n, const sham_instance* inst) {
  require_arg(x != nullptr, "null vector");
  require_arg(static_cast<sham::Index>(n) == inst->problem.dimension,
              "vector length differs from the instance dimension");
  return Eigen::Map<const sham::Vector>(x, static_cast<sham::Index>(n));
}

void copy_out(const sham::Vector& v, double* x, size_t n) {
  require_arg(x != nullptr, "null output vector");
  require_arg(static_cast<sham::Index>(n) == v.size(),
              "output length differs from the instance dimension");
  Eigen::Map<sham::Vector>(x, v.size()) = v;
}

sham_instance* wrap(sham::QcqpData data) {
  auto inst = std::make_unique<sham_instance>();
  inst->problem = sham::make_instance(data);
  inst->data = std::move(data);
  return inst.release();
}

sham::SolverConfig make_config(const sham_instance& inst,
                               const sham_options& o) {
  const double L = inst.data.L_f;
  const double mu = inst.data.mu;
  sham::SolverConfig cfg;
  cfg.beta = o.beta;
  cfg.gamma = o.gamma;
  const double alpha0 = o.alpha0 > 0.0 ? o.alpha0 : 1.0 / L;
  sham::ScheduleKind kind;
  switch (o.schedule) {
    case SHAM_SCHEDULE_CHOICE1_K2: kind = sham::ScheduleKind::kConvexChoice1; break;
    case SHAM_SCHEDULE_CHOICE1_K1_PAPERV:
      kind = sham::ScheduleKind::kConvexChoice1PaperV;
      break;
    case SHAM_SCHEDULE_CHOICE2: kind = sham::ScheduleKind::kConvexChoice2; break;
    case SHAM_SCHEDULE_SWITCHING:
      kind = sham::ScheduleKind::kStronglyConvexSwitching;
      break;
    case SHAM_SCHEDULE_AUTO:
      kind = mu > 0.0 ? sham::ScheduleKind::kStronglyConvexSwitching
                      : sham::ScheduleKind::kConvexChoice1PaperV;
      break;
    default:
      throw sham::Error(sham::ErrorCode::kInvalidConfig, "unknown schedule");
  }
  cfg.schedule = sham::StepsizeSchedule::make(kind, alpha0, L, mu);
  cfg.max_iterations = o.max_iterations;
  cfg.seed = o.seed;
  cfg.record_every = o.record_every;
  cfg.record_wall_time = o.record_wall_time != 0;
  if (o.stopping_enabled) {
    sham::StoppingCriteria s;
    s.feas_tol = o.feas_tol;
    s.gap_tol = o.gap_tol;
    s.stagnation_tol = o.stagnation_tol;
    s.window_M = o.window_m;
    s.fstar = inst.data.fstar;
    cfg.stopping = s;
  } else {
    cfg.stopping.reset();
  }
  cfg.validate();
  return cfg;
}

}  // namespace

extern "C" {

const char* sham_version(void) { return "1.0.0"; }

const char* sham_last_error(void) { return g_last_error.c_str(); }

const char* sham_status_string(sham_status status) {
  switch (status) {
    case SHAM_OK: return "ok";
    case SHAM_ERR_INVALID_INPUT: return "invalid input";
    case SHAM_ERR_INVALID_CONFIG: return "invalid config";
    case SHAM_ERR_NUMERICAL: return "numerical failure";
    case SHAM_ERR_NOT_READY: return "not ready";
    case SHAM_ERR_UNSUPPORTED_DIMENSION: return "unsupported dimension";
    case SHAM_ERR_INFEASIBLE_GRID: return "infeasible grid";
    case SHAM_ERR_ORACLE: return "oracle failure";
    case SHAM_ERR_DEGENERATE: return "degenerate estimate";
    case SHAM_ERR_INVALID_DATA: return "invalid data";
    case SHAM_ERR_IO: return "i/o error";
    case SHAM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

sham_status sham_instance_generate(size_t n, size_t m, double mu,
                                   uint64_t seed, sham_instance** out) {
  return guarded([&] {
    require_arg(out != nullptr, "null output handle");
    *out = wrap(sham::generate_qcqp(static_cast<sham::Index>(n),
                                    static_cast<sham::Index>(m), mu, seed));
  });
}

sham_status sham_instance_load(const char* path, sham_instance** out) {
  return guarded([&] {
    require_arg(path != nullptr && out != nullptr, "null argument");
    *out = wrap(sham::load_instance(path));
  });
}

sham_status sham_instance_save(const sham_instance* instance, const char* path,
                               int write_sidecar) {
  return guarded([&] {
    require_arg(instance != nullptr && path != nullptr, "null argument");
    sham::save_instance(instance->data, path);
    if (write_sidecar) sham::save_instance_sidecar(instance->data, path);
  });
}

void sham_instance_free(sham_instance* instance) { delete instance; }

sham_status sham_instance_info(const sham_instance* instance, size_t* n,
                               size_t* m, double* mu, double* L_f,
                               uint64_t* seed) {
  return guarded([&] {
    require_arg(instance != nullptr, "null instance");
    if (n) *n = static_cast<size_t>(instance->data.dimension);
    if (m) *m = instance->data.constraints.size();
    if (mu) *mu = instance->data.mu;
    if (L_f) *L_f = instance->data.L_f;
    if (seed) *seed = instance->data.seed;
  });
}

sham_status sham_instance_set_fstar(sham_instance* instance, double fstar) {
  return guarded([&] {
    require_arg(instance != nullptr, "null instance");
    require_arg(std::isfinite(fstar), "fstar must be finite");
    instance->data.fstar = fstar;
    instance->problem.known_fstar = fstar;
  });
}

sham_status sham_instance_clear_fstar(sham_instance* instance) {
  return guarded([&] {
    require_arg(instance != nullptr, "null instance");
    instance->data.fstar.reset();
    instance->problem.known_fstar.reset();
  });
}

sham_status sham_instance_get_fstar(const sham_instance* instance,
                                    int* has_fstar, double* fstar) {
  return guarded([&] {
    require_arg(instance != nullptr && has_fstar != nullptr, "null argument");
    *has_fstar = instance->data.fstar.has_value() ? 1 : 0;
    if (instance->data.fstar && fstar) *fstar = *instance->data.fstar;
  });
}

sham_status sham_instance_evaluate(const sham_instance* instance,
                                   const double* x, size_t n, double* f,
                                   double* feas_sq, double* max_viol) {
  return guarded([&] {
    require_arg(instance != nullptr, "null instance");
    const sham::Vector v = copy_in(x, n, instance);
    if (f) *f = instance->problem.objective->value(v);
    if (feas_sq) *feas_sq = sham::feasibility_sq(instance->problem, v);
    if (max_viol) *max_viol = sham::max_violation(instance->problem, v);
  });
}

sham_status sham_oracle_baseline(const sham_instance* instance,
                                 uint64_t iterations,
                                 sham_oracle_result* result, double* xstar,
                                 size_t n) {
  return guarded([&] {
    require_arg(instance != nullptr && result != nullptr, "null argument");
    const auto r = sham::baseline_solver(instance->problem, iterations);
    result->fstar = r.fstar_estimate;
    result->certified_tolerance = r.certified_tolerance;
    if (xstar) copy_out(r.xstar_estimate, xstar, n);
  });
}

sham_status sham_oracle_grid(const sham_instance* instance, const double* lo,
                             const double* hi, size_t n,
                             size_t points_per_axis,
                             sham_oracle_result* result, double* xstar) {
  return guarded([&] {
    require_arg(instance != nullptr && result != nullptr, "null argument");
    const auto r = sham::brute_force_min_grid(
        instance->problem, copy_in(lo, n, instance), copy_in(hi, n, instance),
        points_per_axis);
    result->fstar = r.fstar_estimate;
    result->certified_tolerance = r.certified_tolerance;
    if (xstar) copy_out(r.xstar_estimate, xstar, n);
  });
}

void sham_options_default(sham_options* o) {
  if (!o) return;
  o->beta = 0.96;
  o->gamma = 1.0;
  o->schedule = SHAM_SCHEDULE_AUTO;
  o->alpha0 = 0.0;
  o->max_iterations = 100000;
  o->seed = 0;
  o->record_every = 1;
  o->stopping_enabled = 1;
  o->feas_tol = 1e-2;
  o->gap_tol = 1e-2;
  o->stagnation_tol = 1e-3;
  o->window_m = 10;
  o->record_wall_time = 0;
}

sham_status sham_solve(const sham_instance* instance,
                       const sham_options* options, const double* x0, size_t n,
                       sham_run** out) {
  return guarded([&] {
    require_arg(instance != nullptr && options != nullptr && out != nullptr,
                "null argument");
    auto run = std::make_unique<sham_run>();
    run->problem = instance->problem;
    run->config = make_config(*instance, *options);
    const sham::Vector start =
        x0 ? copy_in(x0, n, instance)
           : sham::Vector::Zero(instance->problem.dimension);
    run->result = sham::run(run->problem, run->config, start);
    *out = run.release();
  });
}

void sham_run_free(sham_run* run) { delete run; }

sham_status sham_run_summary_get(const sham_run* run,
                                 sham_run_summary* summary) {
  return guarded([&] {
    require_arg(run != nullptr && summary != nullptr, "null argument");
    const auto& st = run->result.state;
    const sham::RunRecord rec = sham::make_record(
        run->problem, st, sham::primary_average_mode(run->config));
    summary->iterations = st.k;
    switch (run->result.reason) {
      case sham::StopReason::kConverged: summary->reason = SHAM_STOP_CONVERGED; break;
      case sham::StopReason::kStagnated: summary->reason = SHAM_STOP_STAGNATED; break;
      case sham::StopReason::kBudgetExhausted:
        summary->reason = SHAM_STOP_BUDGET_EXHAUSTED;
        break;
    }
    summary->f_last = rec.f_last;
    summary->feas_sq_last = rec.feas_sq_last;
    summary->max_viol_last = rec.max_viol_last;
    summary->f_avg = rec.f_avg;
    summary->feas_sq_avg = rec.feas_sq_avg;
    summary->grad_norm_max = st.grad_norm_max;
    summary->subgrad_norm_max =
        run->problem.constraints->max_subgradient_norm_seen();
    summary->wall_ns = run->result.wall_ns;
    summary->outside_theory = run->config.outside_theory() ? 1 : 0;
  });
}

sham_status sham_run_final_x(const sham_run* run, double* x, size_t n) {
  return guarded([&] {
    require_arg(run != nullptr, "null run");
    copy_out(run->result.state.x, x, n);
  });
}

sham_status sham_run_record_count(const sham_run* run, size_t* count) {
  return guarded([&] {
    require_arg(run != nullptr && count != nullptr, "null argument");
    *count = run->result.records.size();
  });
}

sham_status sham_run_write_records(const sham_run* run, const char* path,
                                   sham_record_format format) {
  return guarded([&] {
    require_arg(run != nullptr && path != nullptr, "null argument");
    require_arg(format == SHAM_FORMAT_CSV || format == SHAM_FORMAT_JSONL,
                "unknown record format");
    sham::emit_records(run->result.records, path,
                       format == SHAM_FORMAT_CSV ? sham::RecordFormat::kCsv
                                                 : sham::RecordFormat::kJsonl);
  });
}

sham_status sham_run_theory_constants(const sham_run* run, size_t samples,
                                      uint64_t seed,
                                      sham_theory_constants* out) {
  return guarded([&] {
    require_arg(run != nullptr && out != nullptr, "null argument");
    sham::EmpiricalConstants emp;
    emp.B_f = run->result.state.grad_norm_max;
    emp.B_h = sham::estimate_subgradient_bound(run->problem, samples, seed);
    emp.c = sham::estimate_regularity_constant(run->problem, samples, seed);
    const auto r = sham::theory_constants(run->problem, run->config, emp);
    out->B_f_emp = r.B_f_emp;
    out->B_h_emp = r.B_h_emp;
    out->c_emp = r.c_emp;
    out->rho = r.rho;
    out->B_sq = r.B_sq.value_or(std::numeric_limits<double>::quiet_NaN());
    out->theta = r.theta;
    out->has_k0 = r.k0.has_value() ? 1 : 0;
    out->k0 = r.k0.value_or(0);
  });
}

sham_status sham_verify(uint64_t seed, const double* betas, size_t beta_count,
                        int include_rate_runs, sham_verify_callback callback,
                        void* user, int* all_passed) {
  return guarded([&] {
    require_arg(all_passed != nullptr, "null argument");
    require_arg(beta_count == 0 || betas != nullptr, "null beta list");
    sham::verify::Options opts;
    opts.seed = seed;
    opts.include_rate_runs = include_rate_runs != 0;
    if (beta_count > 0) opts.lemma_betas.assign(betas, betas + beta_count);
    *all_passed = 1;
    for (const auto& r : sham::verify::run_all(opts)) {
      if (!r.passed) *all_passed = 0;
      if (callback)
        callback(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), r.seconds,
                 user);
    }
  });
}

}  // extern "C"
