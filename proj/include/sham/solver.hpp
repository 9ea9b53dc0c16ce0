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

#pragma once

#include "sham/experiments.hpp"
#include "sham/linearization.hpp"
#include "sham/problem.hpp"
#include "sham/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sham {

enum class ScheduleKind {
  // alpha0 / (sqrt(k + 2) ln(k + 2))
  kConvexChoice1,
  // alpha0 / (sqrt(k + 1) ln(k + 1)), the variant used for the benchmarks.
  kConvexChoice1PaperV,
  // alpha0 / sqrt(k)
  kConvexChoice2,
  // min(1 / L_f, 2 / (mu (k + 1)))
  kStronglyConvexSwitching,
};

const char* to_string(ScheduleKind kind);
std::optional<ScheduleKind> parse_schedule_kind(const std::string& name);

/// floor(2 L_f / mu - 1). Negative when mu > 2 L_f.
std::int64_t switching_index(double L_f, double mu);

class StepsizeSchedule {
 public:
  /// The convex choices require alpha0 in (0, 1/L_f].
  static StepsizeSchedule convex_choice1(double alpha0, double L_f);
  static StepsizeSchedule convex_choice1_paper_v(double alpha0, double L_f);
  static StepsizeSchedule convex_choice2(double alpha0, double L_f);
  static StepsizeSchedule strongly_convex_switching(double L_f, double mu);
  static StepsizeSchedule make(ScheduleKind kind, double alpha0, double L_f,
                               double mu);

  /// alpha_k. The convex choices are capped at alpha0, which only matters for
  /// the first one or two iterations where the formulas are undefined or
  /// exceed alpha0.
  double operator()(std::uint64_t k) const;

  ScheduleKind kind() const { return kind_; }
  double alpha0() const { return alpha0_; }
  double smoothness() const { return L_f_; }
  double strong_convexity() const { return mu_; }
  bool is_switching() const {
    return kind_ == ScheduleKind::kStronglyConvexSwitching;
  }
  /// k0 for the switching schedule.
  std::optional<std::int64_t> switching_point() const;

 private:
  StepsizeSchedule(ScheduleKind kind, double alpha0, double L_f, double mu)
      : kind_(kind), alpha0_(alpha0), L_f_(L_f), mu_(mu) {}

  ScheduleKind kind_;
  double alpha0_;
  double L_f_;
  double mu_;
};

/// Constraint index distribution. rho = m min_j p_j.
class Sampler {
 public:
  static Sampler uniform(std::size_t m);
  static Sampler with_probabilities(std::vector<double> probabilities);

  std::size_t sample(Rng& rng) const;
  std::size_t size() const { return m_; }
  double rho() const;
  double probability(std::size_t j) const;
  bool is_uniform() const { return cumulative_.empty(); }

 private:
  explicit Sampler(std::size_t m) : m_(m) {}

  std::size_t m_;
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
};

struct SolverConfig {
  double beta = 0.96;
  double gamma = 1.0;
  StepsizeSchedule schedule = StepsizeSchedule::convex_choice2(1.0, 1.0);
  // Empty means uniform sampling.
  std::vector<double> probabilities;
  std::uint64_t max_iterations = 100000;
  std::uint64_t seed = 0;
  std::optional<StoppingCriteria> stopping = StoppingCriteria{};
  std::uint64_t record_every = 1;
  // Off by default so record files are reproducible byte for byte.
  bool record_wall_time = false;

  void validate() const;
  /// beta outside (0, 1): accepted, but not covered by the rate results.
  bool outside_theory() const { return !(beta > 0.0 && beta < 1.0); }
  Sampler make_sampler(std::size_t m) const;
};

enum class AverageMode { kConvex, kStronglyConvex };

struct SolverState {
  std::uint64_t k = 0;
  Vector x;
  Vector u;
  Vector v;
  Vector x_tilde;
  Vector z;

  // S_k = sum_{t<k} alpha_t and sum_{t<k} alpha_t x_{t+1}.
  double convex_weight = 0.0;
  Vector convex_sum;
  // Sum over t > k0 of (t + 1)^2 and of (t + 1)^2 x_{t+1}.
  double sc_weight = 0.0;
  Vector sc_sum;
  bool sc_active = false;

  double grad_norm_max = 0.0;
  double last_alpha = 0.0;
  std::size_t last_j = 0;
  double last_step_norm_sq = 0.0;

  /// Fresh state at x0, which must already lie in Y.
  static SolverState start(const Vector& x0);
};

/// One SHAM iteration:
///   u = x - alpha_k grad f(x),  v = P_Y(u),  j ~ sampler,
///   x~ = gamma v + (1 - gamma) x,  z = relaxed halfspace step of v for the
///   linearization of h_j at x~,  x+ = P_Y(z).
/// Updates both running averages and the gradient-norm monitor.
void sham_step(const ProblemInstance& instance, SolverState& state,
               const SolverConfig& config, const Sampler& sampler, Rng& rng);

Vector averaged_iterate(const SolverState& state, AverageMode mode);

/// The average the rate results are stated for: (t+1)^2 weights under the
/// switching schedule, alpha_t weights otherwise.
AverageMode primary_average_mode(const SolverConfig& config);

enum class StopReason { kConverged, kStagnated, kBudgetExhausted };

const char* to_string(StopReason reason);

struct RunResult {
  SolverState state;
  std::vector<RunRecord> records;
  StopReason reason = StopReason::kBudgetExhausted;
  std::int64_t wall_ns = 0;

  bool budget_exhausted() const {
    return reason == StopReason::kBudgetExhausted;
  }
};

/// Metrics row for the current state.
RunRecord make_record(const ProblemInstance& instance, const SolverState& state,
                      AverageMode mode, std::int64_t wall_ns = 0);

/// Runs SHAM from x0 (projected onto Y first) until the stopping criteria
/// fire or the iteration budget is spent. Records every record_every
/// iterations and always the final one.
RunResult run(const ProblemInstance& instance, const SolverConfig& config,
              const Vector& x0);

/// Stepwise driver for callers that need the state between iterations.
class Solver {
 public:
  Solver(const ProblemInstance& instance, SolverConfig config,
         const Vector& x0);

  void step() { sham_step(*instance_, state_, config_, sampler_, rng_); }
  const SolverState& state() const { return state_; }
  const SolverConfig& config() const { return config_; }
  const Sampler& sampler() const { return sampler_; }
  RunRecord record() const {
    return make_record(*instance_, state_, primary_average_mode(config_));
  }

 private:
  const ProblemInstance* instance_;
  SolverConfig config_;
  Sampler sampler_;
  Rng rng_;
  SolverState state_;
};

}  // namespace sham
