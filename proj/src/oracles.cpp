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

#include "sham/oracles.hpp"

#include "sham/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sham {

const char* to_string(OracleMethod method) {
  return method == OracleMethod::kGrid ? "grid" : "baseline";
}

namespace {

const BoxSet& require_box(const ProblemInstance& instance) {
  const auto* box = dynamic_cast<const BoxSet*>(instance.simple_set.get());
  require(box != nullptr, ErrorCode::kInvalidInput,
          "sampling oracles need a box simple set");
  return *box;
}

Vector sample_box(const BoxSet& box, Rng& rng) {
  Vector x(box.dimension());
  for (Index i = 0; i < x.size(); ++i)
    x(i) = rng.uniform(box.lo()(i), box.hi()(i));
  return x;
}

// One cyclic pass of exact halfspace projections onto violated constraints.
// Returns whether any constraint was violated.
bool polyak_pass(const ProblemInstance& instance, Vector& x,
                 std::uint64_t* steps = nullptr) {
  bool any = false;
  const auto& h = *instance.constraints;
  for (std::size_t j = 0; j < h.count(); ++j) {
    if (steps) ++*steps;
    const double value = h.value(j, x);
    if (!(value > 0.0)) continue;
    any = true;
    const Vector g = h.subgradient(j, x);
    const double gg = g.squaredNorm();
    if (gg > 0.0) x -= (value / gg) * g;
  }
  return any;
}

}  // namespace

OracleReport brute_force_min_grid(const ProblemInstance& instance,
                                  const Vector& lo, const Vector& hi,
                                  std::size_t points_per_axis) {
  const Index n = instance.dimension;
  require(n <= 3, ErrorCode::kUnsupportedDimension,
          "grid oracle supports n <= 3, got " + std::to_string(n));
  require(lo.size() == n && hi.size() == n, ErrorCode::kInvalidInput,
          "grid oracle: bounds have the wrong dimension");
  require((lo.array() < hi.array()).all(), ErrorCode::kInvalidInput,
          "grid oracle: need lo < hi");
  require(points_per_axis >= 3, ErrorCode::kInvalidInput,
          "grid oracle: need at least 3 points per axis");

  const double ppa = static_cast<double>(points_per_axis);
  const Vector step = (hi - lo) / (ppa - 1.0);
  std::size_t total = 1;
  for (Index i = 0; i < n; ++i) total *= points_per_axis;

  const auto& h = *instance.constraints;
  double best = std::numeric_limits<double>::infinity();
  Vector best_x;
  double B_h = 0.0;
  Vector x(n);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (Index i = 0; i < n; ++i) {
      const auto idx = static_cast<double>(rest % points_per_axis);
      rest /= points_per_axis;
      x(i) = lo(i) + idx * step(i);
    }
    bool feasible = instance.simple_set->contains(x, 0.0);
    for (std::size_t j = 0; j < h.count(); ++j) {
      B_h = std::max(B_h, h.subgradient(j, x).norm());
      if (feasible && h.value(j, x) > 0.0) feasible = false;
    }
    if (!feasible) continue;
    const double f = instance.objective->value(x);
    if (f < best) {
      best = f;
      best_x = x;
    }
  }
  require(std::isfinite(best), ErrorCode::kInfeasibleGrid,
          "grid oracle: no feasible grid point");

  const double diameter = (hi - lo).maxCoeff();
  OracleReport r;
  r.fstar_estimate = best;
  r.xstar_estimate = best_x;
  r.method = OracleMethod::kGrid;
  r.certified_tolerance =
      instance.objective->smoothness() * (diameter / ppa) *
          std::sqrt(static_cast<double>(n)) +
      B_h * step.maxCoeff();
  return r;
}

OracleReport baseline_solver(const ProblemInstance& instance,
                             std::uint64_t iterations) {
  require(iterations >= 10000, ErrorCode::kInvalidInput,
          "baseline solver needs at least 1e4 iterations");
  const auto& f = *instance.objective;
  const auto& Y = *instance.simple_set;
  const double L = f.smoothness();
  const double mu = f.strong_convexity();
  const double alpha0 = 1.0 / L;

  Vector x = Y.project(Vector::Zero(instance.dimension));
  double best = std::numeric_limits<double>::infinity();
  Vector best_x;
  double best_viol = 0.0;

  for (std::uint64_t k = 0; k < iterations; ++k) {
    const double kd = static_cast<double>(k);
    const double alpha = mu > 0.0 ? std::min(1.0 / L, 2.0 / (mu * (kd + 1.0)))
                         : k == 0 ? alpha0
                                  : alpha0 / std::sqrt(kd);
    const Vector g = f.gradient(x);
    if (!g.allFinite()) throw NumericalError(k, "baseline gradient");
    x -= alpha * g;

    bool clean = false;
    for (int pass = 0; pass < kBaselineMaxPasses; ++pass) {
      if (!polyak_pass(instance, x)) {
        clean = true;
        break;
      }
    }
    Vector projected = Y.project(x);
    if (projected != x) clean = false;
    x = std::move(projected);
    if (!x.allFinite()) throw NumericalError(k, "baseline iterate");

    const double value = f.value(x);
    if (!(value < best)) continue;
    const double viol = clean ? 0.0 : max_violation(instance, x);
    if (viol <= kBaselineFeasibilityFilter) {
      best = value;
      best_x = x;
      best_viol = viol;
    }
  }
  require(std::isfinite(best), ErrorCode::kOracleFailure,
          "baseline solver: no iterate met the feasibility filter");
  OracleReport r;
  r.fstar_estimate = best;
  r.xstar_estimate = best_x;
  r.method = OracleMethod::kBaseline;
  r.certified_tolerance = best_viol;
  return r;
}

FeasibilityRestoration restore_feasibility(const ProblemInstance& instance,
                                           const Vector& x, double precision) {
  require(precision > 0.0 && std::isfinite(precision),
          ErrorCode::kInvalidInput, "distance oracle: precision must be > 0");
  require(x.size() == instance.dimension && x.allFinite(),
          ErrorCode::kInvalidInput, "distance oracle: bad point");
  const double target = precision * 1e-2;
  FeasibilityRestoration r;
  r.point = x;
  while (max_violation(instance, r.point) > target ||
         !instance.simple_set->contains(r.point, 0.0)) {
    require(r.steps < kMaxFeasibilitySteps, ErrorCode::kOracleFailure,
            "distance oracle: no convergence within 1e6 steps");
    polyak_pass(instance, r.point, &r.steps);
    r.point = instance.simple_set->project(r.point);
  }
  r.distance = (x - r.point).norm();
  return r;
}

double estimate_regularity_constant(const ProblemInstance& instance,
                                    std::size_t samples, std::uint64_t seed) {
  require(samples >= 100, ErrorCode::kInvalidInput,
          "regularity estimate needs at least 100 samples");
  const BoxSet& box = require_box(instance);
  Rng rng(seed);
  double best = 0.0;
  bool any = false;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = sample_box(box, rng);
    const double viol = max_violation(instance, x);
    if (viol <= 0.0) continue;
    any = true;
    best = std::max(best, distance_to_feasible(instance, x, 1e-8) / viol);
  }
  require(any, ErrorCode::kDegenerateSample,
          "regularity estimate: every sample was feasible");
  return best;
}

double estimate_subgradient_bound(const ProblemInstance& instance,
                                  std::size_t samples, std::uint64_t seed) {
  require(samples >= 100, ErrorCode::kInvalidInput,
          "subgradient bound estimate needs at least 100 samples");
  const BoxSet& box = require_box(instance);
  Rng rng(seed);
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector x = sample_box(box, rng);
    for (std::size_t j = 0; j < instance.constraint_count(); ++j)
      best = std::max(best, instance.constraints->subgradient(j, x).norm());
  }
  return best;
}

}  // namespace sham
