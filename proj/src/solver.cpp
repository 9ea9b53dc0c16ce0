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

#include "sham/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace sham {

const char* to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kConvexChoice1: return "choice1_k2";
    case ScheduleKind::kConvexChoice1PaperV: return "choice1_k1_paperV";
    case ScheduleKind::kConvexChoice2: return "choice2";
    case ScheduleKind::kStronglyConvexSwitching: return "switching";
  }
  return "unknown";
}

std::optional<ScheduleKind> parse_schedule_kind(const std::string& name) {
  for (auto kind : {ScheduleKind::kConvexChoice1,
                    ScheduleKind::kConvexChoice1PaperV,
                    ScheduleKind::kConvexChoice2,
                    ScheduleKind::kStronglyConvexSwitching}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kConverged: return "stop_converged";
    case StopReason::kStagnated: return "stop_stagnated";
    case StopReason::kBudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

std::int64_t switching_index(double L_f, double mu) {
  require(mu > 0.0 && std::isfinite(mu), ErrorCode::kInvalidInput,
          "switching index: mu must be positive");
  require(L_f > 0.0 && std::isfinite(L_f), ErrorCode::kInvalidInput,
          "switching index: L_f must be positive");
  return static_cast<std::int64_t>(std::floor(2.0 * L_f / mu - 1.0));
}

// ---------------------------------------------------------------------------
// Stepsizes

namespace {

void check_alpha0(double alpha0, double L_f) {
  require(L_f > 0.0 && std::isfinite(L_f), ErrorCode::kInvalidConfig,
          "stepsize: L_f must be positive");
  require(alpha0 > 0.0 && alpha0 <= 1.0 / L_f, ErrorCode::kInvalidConfig,
          "stepsize: alpha0 must lie in (0, 1/L_f]");
}

}  // namespace

StepsizeSchedule StepsizeSchedule::convex_choice1(double alpha0, double L_f) {
  check_alpha0(alpha0, L_f);
  return {ScheduleKind::kConvexChoice1, alpha0, L_f, 0.0};
}

StepsizeSchedule StepsizeSchedule::convex_choice1_paper_v(double alpha0,
                                                          double L_f) {
  check_alpha0(alpha0, L_f);
  return {ScheduleKind::kConvexChoice1PaperV, alpha0, L_f, 0.0};
}

StepsizeSchedule StepsizeSchedule::convex_choice2(double alpha0, double L_f) {
  check_alpha0(alpha0, L_f);
  return {ScheduleKind::kConvexChoice2, alpha0, L_f, 0.0};
}

StepsizeSchedule StepsizeSchedule::strongly_convex_switching(double L_f,
                                                             double mu) {
  require(L_f > 0.0 && std::isfinite(L_f), ErrorCode::kInvalidConfig,
          "stepsize: L_f must be positive");
  require(mu > 0.0 && std::isfinite(mu), ErrorCode::kInvalidConfig,
          "stepsize: switching schedule needs mu > 0");
  return {ScheduleKind::kStronglyConvexSwitching, 1.0 / L_f, L_f, mu};
}

StepsizeSchedule StepsizeSchedule::make(ScheduleKind kind, double alpha0,
                                        double L_f, double mu) {
  switch (kind) {
    case ScheduleKind::kConvexChoice1: return convex_choice1(alpha0, L_f);
    case ScheduleKind::kConvexChoice1PaperV:
      return convex_choice1_paper_v(alpha0, L_f);
    case ScheduleKind::kConvexChoice2: return convex_choice2(alpha0, L_f);
    case ScheduleKind::kStronglyConvexSwitching:
      return strongly_convex_switching(L_f, mu);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown schedule");
}

double StepsizeSchedule::operator()(std::uint64_t k) const {
  const double kd = static_cast<double>(k);
  switch (kind_) {
    case ScheduleKind::kConvexChoice1:
      if (k == 0) return alpha0_;
      return std::min(alpha0_,
                      alpha0_ / (std::sqrt(kd + 2.0) * std::log(kd + 2.0)));
    case ScheduleKind::kConvexChoice1PaperV:
      if (k == 0) return alpha0_;
      return std::min(alpha0_,
                      alpha0_ / (std::sqrt(kd + 1.0) * std::log(kd + 1.0)));
    case ScheduleKind::kConvexChoice2:
      if (k == 0) return alpha0_;
      return alpha0_ / std::sqrt(kd);
    case ScheduleKind::kStronglyConvexSwitching:
      return std::min(1.0 / L_f_, 2.0 / (mu_ * (kd + 1.0)));
  }
  return 0.0;
}

std::optional<std::int64_t> StepsizeSchedule::switching_point() const {
  if (!is_switching()) return std::nullopt;
  return switching_index(L_f_, mu_);
}

// ---------------------------------------------------------------------------
// Sampling

Sampler Sampler::uniform(std::size_t m) {
  require(m >= 1, ErrorCode::kInvalidConfig, "sampler: m must be >= 1");
  return Sampler(m);
}

Sampler Sampler::with_probabilities(std::vector<double> probabilities) {
  require(!probabilities.empty(), ErrorCode::kInvalidConfig,
          "sampler: empty probability vector");
  double total = 0.0;
  for (double p : probabilities) {
    require(std::isfinite(p) && p > 0.0, ErrorCode::kInvalidConfig,
            "sampler: probabilities must be positive");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorCode::kInvalidConfig,
          "sampler: probabilities must sum to 1");
  Sampler s(probabilities.size());
  s.cumulative_.resize(probabilities.size());
  std::partial_sum(probabilities.begin(), probabilities.end(),
                   s.cumulative_.begin());
  s.cumulative_.back() = total;
  s.probabilities_ = std::move(probabilities);
  return s;
}

std::size_t Sampler::sample(Rng& rng) const {
  if (cumulative_.empty()) return static_cast<std::size_t>(rng.uniform_index(m_));
  const double u = rng.uniform01() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()), m_ - 1);
}

double Sampler::probability(std::size_t j) const {
  require(j < m_, ErrorCode::kInvalidInput, "sampler: index out of range");
  if (cumulative_.empty()) return 1.0 / static_cast<double>(m_);
  return probabilities_[j];
}

double Sampler::rho() const {
  if (cumulative_.empty()) return 1.0;
  return static_cast<double>(m_) *
         *std::min_element(probabilities_.begin(), probabilities_.end());
}

// ---------------------------------------------------------------------------
// Config and state

void SolverConfig::validate() const {
  require(std::isfinite(beta) && beta > 0.0 && beta < 2.0,
          ErrorCode::kInvalidConfig, "beta must lie in (0, 2)");
  require(gamma >= 0.0 && gamma <= 1.0, ErrorCode::kInvalidConfig,
          "gamma must lie in [0, 1]");
  require(max_iterations >= 1, ErrorCode::kInvalidConfig,
          "max_iterations must be >= 1");
  require(record_every >= 1, ErrorCode::kInvalidConfig,
          "record_every must be >= 1");
  if (stopping) stopping->validate();
}

Sampler SolverConfig::make_sampler(std::size_t m) const {
  if (probabilities.empty()) return Sampler::uniform(m);
  require(probabilities.size() == m, ErrorCode::kInvalidConfig,
          "sampler: probability vector length differs from m");
  return Sampler::with_probabilities(probabilities);
}

SolverState SolverState::start(const Vector& x0) {
  SolverState s;
  s.x = x0;
  s.u = x0;
  s.v = x0;
  s.x_tilde = x0;
  s.z = x0;
  s.convex_sum = Vector::Zero(x0.size());
  s.sc_sum = Vector::Zero(x0.size());
  return s;
}

AverageMode primary_average_mode(const SolverConfig& config) {
  return config.schedule.is_switching() ? AverageMode::kStronglyConvex
                                        : AverageMode::kConvex;
}

// ---------------------------------------------------------------------------
// Iteration

void sham_step(const ProblemInstance& instance, SolverState& state,
               const SolverConfig& config, const Sampler& sampler, Rng& rng) {
  const std::uint64_t k = state.k;
  const double alpha = config.schedule(k);

  const Vector grad = instance.objective->gradient(state.x);
  const double grad_norm = grad.norm();
  if (!std::isfinite(grad_norm)) throw NumericalError(k, "gradient");
  state.grad_norm_max = std::max(state.grad_norm_max, grad_norm);

  state.u = state.x - alpha * grad;
  state.v = instance.simple_set->project(state.u);

  const std::size_t j = sampler.sample(rng);
  state.x_tilde = config.gamma == 1.0
                      ? state.v
                      : Vector(config.gamma * state.v +
                               (1.0 - config.gamma) * state.x);
  const ConstraintLinearization lin =
      linearize(*instance.constraints, j, state.x_tilde);
  if (!std::isfinite(lin.value)) throw NumericalError(k, "constraint value");
  if (!lin.subgradient.allFinite())
    throw NumericalError(k, "constraint subgradient");

  state.z = relaxed_halfspace_step(lin, state.v, config.beta);
  Vector next = instance.simple_set->project(state.z);

  state.last_step_norm_sq = (next - state.x).squaredNorm();
  state.x = std::move(next);
  state.last_alpha = alpha;
  state.last_j = j;

  state.convex_weight += alpha;
  state.convex_sum.noalias() += alpha * state.x;
  if (const auto k0 = config.schedule.switching_point();
      k0 && static_cast<std::int64_t>(k) > *k0) {
    const double w = static_cast<double>(k + 1) * static_cast<double>(k + 1);
    state.sc_weight += w;
    state.sc_sum.noalias() += w * state.x;
    state.sc_active = true;
  }
  ++state.k;
}

Vector averaged_iterate(const SolverState& state, AverageMode mode) {
  if (mode == AverageMode::kConvex) {
    require(state.convex_weight > 0.0, ErrorCode::kNotReady,
            "convex average has no terms yet");
    return state.convex_sum / state.convex_weight;
  }
  require(state.sc_active && state.sc_weight > 0.0, ErrorCode::kNotReady,
          "strongly convex average has no terms yet (k <= k0)");
  return state.sc_sum / state.sc_weight;
}

RunRecord make_record(const ProblemInstance& instance, const SolverState& state,
                      AverageMode mode, std::int64_t wall_ns) {
  RunRecord r;
  r.k = state.k;
  r.f_last = instance.objective->value(state.x);
  r.feas_sq_last = 0.0;
  r.max_viol_last = 0.0;
  for (std::size_t j = 0; j < instance.constraint_count(); ++j) {
    const double h = positive_part(instance.constraints->value(j, state.x));
    r.feas_sq_last += h * h;
    r.max_viol_last = std::max(r.max_viol_last, h);
  }
  const bool ready = mode == AverageMode::kConvex
                         ? state.convex_weight > 0.0
                         : state.sc_active && state.sc_weight > 0.0;
  if (ready) {
    const Vector avg = averaged_iterate(state, mode);
    r.f_avg = instance.objective->value(avg);
    r.feas_sq_avg = feasibility_sq(instance, avg);
  } else {
    r.f_avg = std::numeric_limits<double>::quiet_NaN();
    r.feas_sq_avg = std::numeric_limits<double>::quiet_NaN();
  }
  r.alpha_k = state.last_alpha;
  r.sampled_j = state.last_j;
  r.step_norm_sq = state.last_step_norm_sq;
  r.wall_ns = wall_ns;
  return r;
}

RunResult run(const ProblemInstance& instance, const SolverConfig& config,
              const Vector& x0) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  Solver solver(instance, config, x0);
  const AverageMode mode = primary_average_mode(config);

  RunResult result;
  std::deque<double> window;
  std::vector<double> window_buf;
  const auto elapsed = [&] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() -
                                                                t0)
        .count();
  };

  for (std::uint64_t it = 0; it < config.max_iterations; ++it) {
    solver.step();
    const SolverState& s = solver.state();

    StopDecision decision = StopDecision::kContinue;
    if (config.stopping) {
      const StoppingCriteria& crit = *config.stopping;
      window.push_back(s.last_step_norm_sq);
      if (window.size() > crit.window_M) window.pop_front();
      StoppingInput in;
      in.f_value = instance.objective->value(s.x);
      // The feasibility sum is only needed once the gap test has passed.
      in.feas_sq = std::numeric_limits<double>::infinity();
      if (crit.fstar && std::abs(in.f_value - *crit.fstar) <= crit.gap_tol)
        in.feas_sq = feasibility_sq(instance, s.x);
      window_buf.assign(window.begin(), window.end());
      in.recent_step_norms_sq = window_buf;
      decision = stopping_check(in, crit);
    }

    const bool last = decision != StopDecision::kContinue ||
                      it + 1 == config.max_iterations;
    if (last || s.k % config.record_every == 0) {
      result.records.push_back(make_record(
          instance, s, mode, config.record_wall_time ? elapsed() : 0));
    }
    if (decision == StopDecision::kConverged) {
      result.reason = StopReason::kConverged;
      break;
    }
    if (decision == StopDecision::kStagnated) {
      result.reason = StopReason::kStagnated;
      break;
    }
  }
  result.state = solver.state();
  result.wall_ns = elapsed();
  return result;
}

Solver::Solver(const ProblemInstance& instance, SolverConfig config,
               const Vector& x0)
    : instance_(&instance),
      config_(std::move(config)),
      sampler_(Sampler::uniform(1)),
      rng_(config_.seed) {
  config_.validate();
  require(x0.size() == instance.dimension, ErrorCode::kInvalidInput,
          "x0 has the wrong dimension");
  require(x0.allFinite(), ErrorCode::kInvalidInput, "x0 must be finite");
  sampler_ = config_.make_sampler(instance.constraint_count());
  state_ = SolverState::start(instance.simple_set->project(x0));
}

}  // namespace sham
