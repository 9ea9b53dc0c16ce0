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

#include "sham/solver.hpp"

#include <cstdint>
#include <optional>

namespace sham {

/// Empirical surrogates for the constants of the rate analysis. Reporting
/// only; the solver never reads them.
struct EmpiricalConstants {
  double B_f = 0.0;  // max ||grad f(x_k)|| along a run
  double B_h = 0.0;  // max subgradient norm
  double c = 0.0;    // linear regularity constant
};

struct TheoryConstantsReport {
  double B_f_emp = 0.0;
  double B_h_emp = 0.0;
  double c_emp = 0.0;
  double rho = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::size_t m = 0;
  // Absent when beta is outside (0, 1), where the formula has no meaning.
  std::optional<double> B_sq;
  // 1 - mu / L_f.
  double theta = 1.0;
  // Absent for mu = 0.
  std::optional<std::int64_t> k0;
};

/// B_f^2 (1/(1-beta) + beta(1-beta)(1-gamma)^2 (1 + rho/(2 m c^2 B_h^2))).
double theory_B_sq(double B_f, double B_h, double c, double rho, double beta,
                   double gamma, std::size_t m);

TheoryConstantsReport theory_constants(const ProblemInstance& instance,
                                       const SolverConfig& config,
                                       const EmpiricalConstants& empirical);

}  // namespace sham
