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

#include <cmath>
#include <limits>
#include <memory>

#include "doctest.h"
#include "sham/linearization.hpp"
#include "sham/problem.hpp"
#include "sham/rng.hpp"

using sham::ConstraintLinearization;
using sham::Matrix;
using sham::Vector;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

ConstraintLinearization make_lin(Vector anchor, double value, Vector grad) {
  ConstraintLinearization lin;
  lin.anchor = std::move(anchor);
  lin.value = value;
  lin.subgradient = std::move(grad);
  return lin;
}

// Closed-form Euclidean projection onto {y : a'y <= c}.
Vector project_halfspace(const Vector& a, double c, const Vector& v) {
  const double excess = a.dot(v) - c;
  if (excess <= 0.0) return v;
  return v - excess / a.squaredNorm() * a;
}

sham::SocConstraints unit_ball() {
  sham::SocConstraintData d;
  d.Q = Matrix::Identity(2, 2);
  d.a = Vector::Zero(2);
  d.q = Vector::Zero(2);
  d.b = 1.0;
  return sham::SocConstraints({d});
}

}  // namespace

TEST_CASE("linearize examples") {
  Matrix A(1, 2);
  A << 1, 0;
  Vector b(1);
  b << 1;
  sham::AffineConstraints aff(A, b);
  const auto lin = sham::linearize(aff, 0, vec2(0, 0));
  CHECK(lin.value == -1.0);
  CHECK(lin.subgradient == vec2(1, 0));
  CHECK(sham::halfspace_evaluate(lin, vec2(1, 5)) == 0.0);

  const auto ball = unit_ball();
  const auto sl = sham::linearize(ball, 0, vec2(3, 4));
  CHECK(sl.value == doctest::Approx(4.0));
  CHECK(sl.subgradient(0) == doctest::Approx(0.6));
  CHECK(sl.subgradient(1) == doctest::Approx(0.8));
  CHECK(sham::halfspace_evaluate(sl, vec2(0, 0)) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(sham::linearize(ball, 1, vec2(0, 0)), sham::Error);
}

TEST_CASE("the linearization underestimates the constraint") {
  const auto ball = unit_ball();
  sham::Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    const Vector anchor = vec2(rng.uniform(-5, 5), rng.uniform(-5, 5));
    const auto lin = sham::linearize(ball, 0, anchor);
    for (int t = 0; t < 50; ++t) {
      const Vector y = vec2(rng.uniform(-10, 10), rng.uniform(-10, 10));
      CHECK(sham::halfspace_evaluate(lin, y) <= ball.value(0, y) + 1e-10);
    }
  }
}

TEST_CASE("a zero subgradient induces the whole space") {
  const auto lin = make_lin(vec2(1, 1), 5.0, vec2(0, 0));
  CHECK(sham::has_zero_subgradient(lin));
  CHECK(sham::halfspace_contains(lin, vec2(100, -3)));
  CHECK(sham::relaxed_halfspace_step(lin, vec2(7, 8), 0.96) == vec2(7, 8));

  // Subgradients below the zero threshold count as zero.
  const auto tiny = make_lin(vec2(1, 1), 5.0, vec2(1e-16, 0));
  CHECK(sham::has_zero_subgradient(tiny));
  CHECK(sham::relaxed_halfspace_step(tiny, vec2(7, 8), 1.0) == vec2(7, 8));
}

TEST_CASE("relaxed step examples") {
  // h(x) = x1 linearized at (2, 0).
  const auto lin = make_lin(vec2(2, 0), 2.0, vec2(1, 0));
  const Vector v = vec2(3, 5);
  CHECK(sham::halfspace_evaluate(lin, v) == 3.0);
  const Vector p = sham::relaxed_halfspace_step(lin, v, 1.0);
  CHECK(p(0) == 0.0);
  CHECK(p(1) == 5.0);
  const Vector r = sham::relaxed_halfspace_step(lin, v, 0.96);
  CHECK(r(0) == doctest::Approx(0.12).epsilon(1e-14));
  CHECK(r(1) == 5.0);
  const Vector inside = vec2(-1, 2);
  for (double beta : {0.1, 0.96, 1.9})
    CHECK(sham::relaxed_halfspace_step(lin, inside, beta) == inside);
}

TEST_CASE("beta = 1 is the closed-form halfspace projection") {
  sham::Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const Vector a = vec2(rng.normal(), rng.normal());
    const Vector anchor = vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const double value = rng.uniform(-2, 2);
    const auto lin = make_lin(anchor, value, a);
    const Vector v = vec2(rng.uniform(-10, 10), rng.uniform(-10, 10));
    // l(y) <= 0  <=>  a'y <= a'anchor - value
    const Vector expected = project_halfspace(a, a.dot(anchor) - value, v);
    const Vector got = sham::relaxed_halfspace_step(lin, v, 1.0);
    CHECK((got - expected).norm() <= 1e-12 * (1.0 + v.norm()));
    CHECK(sham::halfspace_project(lin, v) == got);
  }
}

TEST_CASE("relaxed step equals the convex combination form") {
  sham::Rng rng(2);
  for (double beta : {0.1, 0.5, 0.96, 1.0, 1.5, 1.9}) {
    for (int i = 0; i < 1000; ++i) {
      const Vector a = vec2(rng.normal(), rng.normal());
      const auto lin = make_lin(vec2(rng.normal(), rng.normal()),
                                rng.uniform(-2, 2), a);
      const Vector v = vec2(rng.uniform(-10, 10), rng.uniform(-10, 10));
      const Vector proj = project_halfspace(
          a, a.dot(lin.anchor) - lin.value, v);
      const Vector combo = (1.0 - beta) * v + beta * proj;
      const Vector got = sham::relaxed_halfspace_step(lin, v, beta);
      CHECK((got - combo).norm() <= 1e-12 * (1.0 + combo.norm()));
    }
  }
}

TEST_CASE("the relaxed step is Fejer monotone toward the halfspace") {
  sham::Rng rng(3);
  for (double beta : {0.5, 0.96, 1.5}) {
    for (int i = 0; i < 1000; ++i) {
      const Vector a = vec2(rng.normal(), rng.normal());
      const auto lin = make_lin(Vector::Zero(2), rng.uniform(-1, 1), a);
      const Vector v = vec2(rng.uniform(-10, 10), rng.uniform(-10, 10));
      Vector q = vec2(rng.uniform(-10, 10), rng.uniform(-10, 10));
      if (sham::halfspace_evaluate(lin, q) > 0.0)
        q = project_halfspace(a, -lin.value, q);
      const Vector s = sham::relaxed_halfspace_step(lin, v, beta);
      CHECK((s - q).norm() <= (v - q).norm() + 1e-12);
    }
  }
}

TEST_CASE("feasible points lie in every induced halfspace") {
  const auto d = sham::generate_qcqp(4, 6, 0.0, 5);
  const sham::SocConstraints cons(d.constraints);
  sham::Rng rng(4);
  int feasible = 0;
  for (int t = 0; t < 2000; ++t) {
    Vector y(4);
    for (int i = 0; i < 4; ++i) y(i) = rng.uniform(-0.5, 0.5);
    bool ok = true;
    for (std::size_t j = 0; j < cons.count(); ++j) ok &= cons.value(j, y) <= 0;
    if (!ok) continue;
    ++feasible;
    Vector anchor(4);
    for (int i = 0; i < 4; ++i) anchor(i) = rng.uniform(-50, 50);
    const std::size_t j = rng.uniform_index(cons.count());
    const auto lin = sham::linearize(cons, j, anchor);
    CHECK(sham::halfspace_evaluate(lin, y) <= 1e-10 * (1.0 + anchor.norm()));
  }
  CHECK(feasible > 50);
}

TEST_CASE("invalid step inputs are rejected") {
  const auto lin = make_lin(vec2(0, 0), 1.0, vec2(1, 0));
  CHECK_THROWS_AS(sham::relaxed_halfspace_step(lin, vec2(1, 1), 0.0),
                  sham::Error);
  CHECK_THROWS_AS(sham::relaxed_halfspace_step(lin, vec2(1, 1), -1.0),
                  sham::Error);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sham::relaxed_halfspace_step(lin, vec2(nan, 1), 1.0),
                  sham::Error);
}
