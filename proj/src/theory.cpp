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

#include "sham/theory.hpp"

#include <cmath>

namespace sham {

double theory_B_sq(double B_f, double B_h, double c, double rho, double beta,
                   double gamma, std::size_t m) {
  const double one_minus_gamma = 1.0 - gamma;
  const double md = static_cast<double>(m);
  return B_f * B_f *
         (1.0 / (1.0 - beta) +
          beta * (1.0 - beta) * one_minus_gamma * one_minus_gamma *
              (1.0 + rho / (2.0 * md * c * c * B_h * B_h)));
}

TheoryConstantsReport theory_constants(const ProblemInstance& instance,
                                       const SolverConfig& config,
                                       const EmpiricalConstants& empirical) {
  require(empirical.c != 0.0, ErrorCode::kDegenerateConstant,
          "theory constants: regularity constant c is zero");
  require(empirical.B_h > 0.0, ErrorCode::kDegenerateConstant,
          "theory constants: B_h must be positive");
  TheoryConstantsReport r;
  r.B_f_emp = empirical.B_f;
  r.B_h_emp = empirical.B_h;
  r.c_emp = empirical.c;
  r.rho = config.make_sampler(instance.constraint_count()).rho();
  r.beta = config.beta;
  r.gamma = config.gamma;
  r.m = instance.constraint_count();
  if (!config.outside_theory())
    r.B_sq = theory_B_sq(r.B_f_emp, r.B_h_emp, r.c_emp, r.rho, r.beta, r.gamma,
                         r.m);
  const double L = instance.objective->smoothness();
  const double mu = instance.objective->strong_convexity();
  r.theta = 1.0 - mu / L;
  if (mu > 0.0) r.k0 = switching_index(L, mu);
  return r;
}

}  // namespace sham
