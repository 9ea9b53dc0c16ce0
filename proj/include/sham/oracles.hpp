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

#include "sham/problem.hpp"

#include <cstdint>

namespace sham {

enum class OracleMethod { kGrid, kBaseline };

const char* to_string(OracleMethod method);

/// Reference estimate of the optimal value and an optimal point.
/// `xstar_estimate` has max_violation <= certified_tolerance.
struct OracleReport {
  double fstar_estimate = 0.0;
  Vector xstar_estimate;
  OracleMethod method = OracleMethod::kGrid;
  double certified_tolerance = 0.0;
};

/// Exhaustive search over a points_per_axis^n grid on [lo, hi] (n <= 3).
/// Only points with every h_j <= 0 exactly are candidates.
///
/// certified_tolerance = L_f (diameter / points_per_axis) sqrt(n) + B_h spacing
/// where diameter is the widest axis, spacing the widest grid step, and B_h
/// the largest subgradient norm seen on the grid.
OracleReport brute_force_min_grid(const ProblemInstance& instance,
                                  const Vector& lo, const Vector& hi,
                                  std::size_t points_per_axis);

/// Deterministic full-information reference solver. Each iteration takes a
/// projected gradient step (min(1/L_f, 2/(mu(k+1))) if mu > 0, else
/// alpha0/sqrt(k) with alpha0 = 1/L_f), then exact halfspace projections onto
/// every violated constraint in cyclic order, repeated until a full pass finds
/// no violation (at most kBaselineMaxPasses passes), then projects onto Y.
/// Returns the lowest objective among iterates with max_violation <= 1e-6.
OracleReport baseline_solver(const ProblemInstance& instance,
                             std::uint64_t iterations);

inline constexpr int kBaselineMaxPasses = 50;
inline constexpr double kBaselineFeasibilityFilter = 1e-6;

struct FeasibilityRestoration {
  Vector point;       // feasible endpoint
  double distance = 0.0;
  std::uint64_t steps = 0;
};

/// Cyclic Polyak projections over all constraints (each pass followed by the
/// projection onto Y) from x until max_violation <= precision * 1e-2. The
/// distance to the endpoint is an upper bound on dist(x, X); it is exact for
/// a single halfspace or a single ball.
FeasibilityRestoration restore_feasibility(const ProblemInstance& instance,
                                           const Vector& x, double precision);

inline double distance_to_feasible(const ProblemInstance& instance,
                                   const Vector& x, double precision) {
  return restore_feasibility(instance, x, precision).distance;
}

inline constexpr std::uint64_t kMaxFeasibilitySteps = 1000000;

/// max over uniform samples x in Y (infeasible ones only) of
/// dist(x, X) / max_j (h_j(x))_+. Requires Y to be a box.
double estimate_regularity_constant(const ProblemInstance& instance,
                                    std::size_t samples, std::uint64_t seed);

/// max over uniform samples x in Y and all j of ||subgradient_j(x)||.
double estimate_subgradient_bound(const ProblemInstance& instance,
                                  std::size_t samples, std::uint64_t seed);

}  // namespace sham
