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

#include "sham/linearization.hpp"
#include "sham/problem.hpp"
#include "sham/solver.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sham::verify {

// Property suites shared by the `verify` command and the test binaries.

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

using StepFunction = std::function<Vector(const ConstraintLinearization&,
                                          const Vector&, double)>;

struct Options {
  std::uint64_t seed = 2024;
  std::vector<double> lemma_betas{0.5, 0.96, 1.5};
  std::vector<double> lemma_gammas{1.0, 0.0};
  std::uint64_t lemma_iterations = 1000;
  std::uint64_t lemma_seeds = 5;
  std::size_t identity_cases = 10000;
  std::size_t subgradient_triples = 10000;
  bool include_rate_runs = true;
  // Step under test in the halfspace suite; swapped out by mutation tests.
  StepFunction step = relaxed_halfspace_step;
};

SuiteResult subgradient_inequalities(const Options& options);
SuiteResult halfspace_identities(const Options& options);
SuiteResult distance_lemma(const Options& options);
SuiteResult stepsize_schedules(const Options& options);
SuiteResult sampler_frequencies(const Options& options);
SuiteResult box_projection(const Options& options);
SuiteResult stopping_rules(const Options& options);
SuiteResult rate_fits(const Options& options);

std::vector<SuiteResult> run_all(const Options& options);

// Test instances whose distance to the feasible set has a closed form.
// All use f(x) = 0.5 ||x - c||^2 with c infeasible and Y = [-1e3, 1e3]^2.
enum class ExactDistanceCase { kHalfspace, kBall, kTwoHalfspaces };

const char* to_string(ExactDistanceCase c);
ProblemInstance exact_distance_instance(ExactDistanceCase c);
double exact_distance(ExactDistanceCase c, const Vector& x);

struct DistanceLemmaOutcome {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  double worst_excess = 0.0;  // max of dist(x+) - dist(v)
};

/// Runs SHAM and compares dist(x_{k+1}, X) with dist(v_k, X) at every
/// iteration, using `distance` for both sides.
DistanceLemmaOutcome check_distance_lemma(
    const ProblemInstance& instance,
    const std::function<double(const Vector&)>& distance, double beta,
    double gamma, std::uint64_t iterations, std::uint64_t seed, double slack);

struct RateCurve {
  std::vector<std::uint64_t> ks;
  std::vector<double> mean_gap;      // mean over seeds of |f(avg) - fstar|
  std::vector<double> mean_feas_sq;  // mean over seeds of feas_sq(avg)
  std::vector<double> mean_feas_sq_last;
};

/// Roughly `count` distinct integers spread log-uniformly over [from, to].
std::vector<std::uint64_t> log_checkpoints(std::uint64_t from, std::uint64_t to,
                                           std::size_t count);

/// Runs SHAM with seeds base.seed, base.seed + 1, ... (stopping disabled) from
/// the origin and averages the averaged-iterate metrics at each checkpoint.
RateCurve average_over_seeds(const ProblemInstance& instance,
                             const SolverConfig& base,
                             double fstar, std::uint64_t seeds,
                             const std::vector<std::uint64_t>& checkpoints);

}  // namespace sham::verify
