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

#include "sham/linearization.hpp"

#include <cmath>

namespace sham {

bool has_zero_subgradient(const ConstraintLinearization& lin) {
  return lin.subgradient.norm() <= 1e-14 * (1.0 + lin.anchor.norm());
}

ConstraintLinearization linearize(const ConstraintOracle& oracle,
                                  std::size_t j, const Vector& anchor) {
  ConstraintLinearization lin;
  lin.value = oracle.value(j, anchor);
  lin.subgradient = oracle.subgradient(j, anchor);
  lin.anchor = anchor;
  lin.index = j;
  return lin;
}

double halfspace_evaluate(const ConstraintLinearization& lin, const Vector& y) {
  require(y.size() == lin.anchor.size() &&
              lin.subgradient.size() == lin.anchor.size(),
          ErrorCode::kInvalidInput, "halfspace: dimension mismatch");
  return lin.value + lin.subgradient.dot(y - lin.anchor);
}

bool halfspace_contains(const ConstraintLinearization& lin, const Vector& y) {
  return has_zero_subgradient(lin) || halfspace_evaluate(lin, y) <= 0.0;
}

Vector halfspace_project(const ConstraintLinearization& lin, const Vector& v) {
  return relaxed_halfspace_step(lin, v, 1.0);
}

Vector relaxed_halfspace_step(const ConstraintLinearization& lin,
                              const Vector& v, double beta) {
  require(std::isfinite(beta) && beta > 0.0, ErrorCode::kInvalidInput,
          "relaxed step: beta must be finite and positive");
  require(v.allFinite() && lin.anchor.allFinite() &&
              lin.subgradient.allFinite() && std::isfinite(lin.value),
          ErrorCode::kInvalidInput, "relaxed step: non-finite input");
  if (has_zero_subgradient(lin)) return v;
  const double violation = positive_part(halfspace_evaluate(lin, v));
  if (violation == 0.0) return v;
  return v - (beta * violation / lin.subgradient.squaredNorm()) * lin.subgradient;
}

}  // namespace sham
