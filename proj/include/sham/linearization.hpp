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

namespace sham {

/// The linear model l(y) = value + <subgradient, y - anchor> of constraint
/// `index` built at `anchor`. It underestimates h_index everywhere, so the
/// halfspace {y : l(y) <= 0} contains the constraint's feasible set.
struct ConstraintLinearization {
  Vector anchor;
  double value = 0.0;
  Vector subgradient;
  std::size_t index = 0;
};

/// ||subgradient|| <= 1e-14 (1 + ||anchor||) counts as a zero subgradient,
/// in which case the halfspace degenerates to the whole space.
bool has_zero_subgradient(const ConstraintLinearization& lin);

ConstraintLinearization linearize(const ConstraintOracle& oracle,
                                  std::size_t j, const Vector& anchor);

double halfspace_evaluate(const ConstraintLinearization& lin, const Vector& y);

bool halfspace_contains(const ConstraintLinearization& lin, const Vector& y);

/// Euclidean projection onto the halfspace (identity for a zero subgradient).
Vector halfspace_project(const ConstraintLinearization& lin, const Vector& v);

/// v - beta (l(v))_+ / ||g||^2 g, or v itself when g is zero. Equal to
/// (1 - beta) v + beta halfspace_project(lin, v).
Vector relaxed_halfspace_step(const ConstraintLinearization& lin,
                              const Vector& v, double beta);

}  // namespace sham
