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

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "doctest.h"
#include "sham/problem.hpp"
#include "sham/solver.hpp"

using sham::Matrix;
using sham::SolverConfig;
using sham::StepsizeSchedule;
using sham::Vector;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

// f(x) = x^2 / 2 on [-1e3, 1e3] with the affine constraint a*x <= b.
sham::ProblemInstance one_dim(double a, double b) {
  auto f = std::make_shared<sham::QuadraticObjective>(
      sham::QuadraticObjective::with_exact_constants(Matrix::Identity(1, 1),
                                                     Vector::Zero(1)));
  Matrix A(1, 1);
  A << a;
  auto h = std::make_shared<sham::AffineConstraints>(A, scalar(b));
  auto box = std::make_shared<sham::BoxSet>(sham::BoxSet::symmetric(1, 1e3));
  return sham::make_instance(f, h, box);
}

SolverConfig one_dim_config() {
  SolverConfig c;
  c.schedule = StepsizeSchedule::convex_choice2(1.0, 1.0);
  c.beta = 0.96;
  c.gamma = 1.0;
  c.stopping.reset();
  return c;
}

class NanObjective final : public sham::ObjectiveOracle {
 public:
  sham::Index dimension() const override { return 1; }
  double value(const Vector&) const override { return 0.0; }
  Vector gradient(const Vector& x) const override {
    return x(0) < 0.5 ? scalar(-1.0)
                      : scalar(std::numeric_limits<double>::quiet_NaN());
  }
  double smoothness() const override { return 1.0; }
  double strong_convexity() const override { return 0.0; }
};

}  // namespace

TEST_CASE("stepsize examples") {
  const auto c2 = StepsizeSchedule::convex_choice2(0.5, 2.0);
  CHECK(c2(4) == 0.25);
  CHECK(c2(0) == 0.5);
  const auto sw = StepsizeSchedule::strongly_convex_switching(10.0, 1.0);
  CHECK(sw(5) == 0.1);
  CHECK(sw(39) == 0.05);
  REQUIRE(sw.switching_point().has_value());
  CHECK(*sw.switching_point() == 19);
  CHECK_FALSE(c2.switching_point().has_value());
}

TEST_CASE("convex schedules follow their formulas and are capped at alpha0") {
  const double a0 = 0.3;
  const auto k2 = StepsizeSchedule::convex_choice1(a0, 1.0);
  const auto k1 = StepsizeSchedule::convex_choice1_paper_v(a0, 1.0);
  const auto c2 = StepsizeSchedule::convex_choice2(a0, 1.0);
  for (std::uint64_t k = 1; k < 5000; k += 7) {
    const double d = double(k);
    CHECK(k2(k) == doctest::Approx(std::min(
                       a0, a0 / (std::sqrt(d + 2) * std::log(d + 2))))
                       .epsilon(1e-15));
    if (k >= 2)
      CHECK(k1(k) == doctest::Approx(std::min(
                         a0, a0 / (std::sqrt(d + 1) * std::log(d + 1))))
                         .epsilon(1e-15));
    CHECK(c2(k) == doctest::Approx(a0 / std::sqrt(d)).epsilon(1e-15));
  }
  CHECK(k1(0) == a0);
  CHECK(k1(1) == a0);
  CHECK(k2(0) == a0);
  for (const auto* s : {&k2, &k1, &c2}) {
    for (std::uint64_t k = 1; k < 3000; ++k) {
      CHECK((*s)(k + 1) <= (*s)(k));
      CHECK((*s)(k) > 0.0);
    }
  }
}

TEST_CASE("convex schedules reject alpha0 outside (0, 1/L]") {
  CHECK_THROWS_AS(StepsizeSchedule::convex_choice2(0.6, 2.0), sham::Error);
  CHECK_THROWS_AS(StepsizeSchedule::convex_choice1(0.0, 2.0), sham::Error);
  CHECK_THROWS_AS(StepsizeSchedule::convex_choice1_paper_v(-1.0, 2.0),
                  sham::Error);
  CHECK_NOTHROW(StepsizeSchedule::convex_choice2(0.5, 2.0));
}

TEST_CASE("switching schedule is exact on both phases") {
  for (auto [L, mu] : {std::pair{10.0, 1.0}, std::pair{3.7, 0.4},
                       std::pair{1.0, 1.0}, std::pair{0.4, 1.0}}) {
    const auto s = StepsizeSchedule::strongly_convex_switching(L, mu);
    const std::int64_t k0 = *s.switching_point();
    CHECK(k0 == static_cast<std::int64_t>(std::floor(2.0 * L / mu - 1.0)));
    for (std::uint64_t k = 0; k < 500; ++k) {
      if (static_cast<std::int64_t>(k) <= k0)
        CHECK(s(k) == 1.0 / L);
      else
        CHECK(s(k) == std::min(1.0 / L, 2.0 / (mu * double(k + 1))));
      CHECK(s(k + 1) <= s(k));
    }
  }
}

TEST_CASE("switching_index examples") {
  CHECK(sham::switching_index(10.0, 1.0) == 19);
  CHECK(sham::switching_index(1.0, 1.0) == 1);
  CHECK(sham::switching_index(2.5, 2.5) == 1);
  CHECK(sham::switching_index(0.4, 1.0) == -1);
  CHECK_THROWS_AS(sham::switching_index(1.0, 0.0), sham::Error);
  CHECK_THROWS_AS(sham::switching_index(1.0, -1.0), sham::Error);
}

TEST_CASE("schedule names round-trip") {
  for (auto k : {sham::ScheduleKind::kConvexChoice1,
                 sham::ScheduleKind::kConvexChoice1PaperV,
                 sham::ScheduleKind::kConvexChoice2,
                 sham::ScheduleKind::kStronglyConvexSwitching})
    CHECK(sham::parse_schedule_kind(sham::to_string(k)) == k);
  CHECK(std::string(sham::to_string(sham::ScheduleKind::kConvexChoice1)) ==
        "choice1_k2");
  CHECK(std::string(sham::to_string(sham::ScheduleKind::kConvexChoice1PaperV)) ==
        "choice1_k1_paperV");
  CHECK_FALSE(sham::parse_schedule_kind("nope").has_value());
}

TEST_CASE("sampler: rho and empirical frequencies") {
  const auto u = sham::Sampler::uniform(4);
  CHECK(u.rho() == 1.0);
  CHECK(u.probability(2) == 0.25);

  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  const auto s = sham::Sampler::with_probabilities(p);
  CHECK(s.rho() == doctest::Approx(0.4));
  CHECK_THROWS_AS(sham::Sampler::with_probabilities({0.5, 0.6}), sham::Error);
  CHECK_THROWS_AS(sham::Sampler::with_probabilities({1.0, 0.0}), sham::Error);

  const int N = 100000;
  for (const auto* sampler : {&u, &s}) {
    sham::Rng rng(77);
    std::vector<int> counts(4, 0);
    for (int i = 0; i < N; ++i) ++counts[sampler->sample(rng)];
    for (std::size_t j = 0; j < 4; ++j) {
      const double pj = sampler->probability(j);
      const double freq = double(counts[j]) / N;
      CHECK(std::abs(freq - pj) <= 3.0 * std::sqrt(pj * (1 - pj) / N));
    }
  }
}

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK_FALSE(c.outside_theory());
  c.beta = 1.5;
  CHECK_NOTHROW(c.validate());
  CHECK(c.outside_theory());
  c.beta = 2.0;
  CHECK_THROWS_AS(c.validate(), sham::Error);
  c.beta = 0.96;
  c.gamma = 1.1;
  CHECK_THROWS_AS(c.validate(), sham::Error);
  c.gamma = 0.0;
  c.max_iterations = 0;
  CHECK_THROWS_AS(c.validate(), sham::Error);
}

TEST_CASE("hand-traced single steps in one dimension") {
  const auto cfg = one_dim_config();
  const auto sampler = sham::Sampler::uniform(1);
  {
    // h(x) = -x: the gradient step lands on the boundary.
    const auto inst = one_dim(-1.0, 0.0);
    auto st = sham::SolverState::start(scalar(4.0));
    sham::Rng rng(0);
    sham::sham_step(inst, st, cfg, sampler, rng);
    CHECK(st.u(0) == 0.0);
    CHECK(st.v(0) == 0.0);
    CHECK(st.x(0) == 0.0);
    CHECK(st.k == 1);
  }
  {
    // h(x) = 1 - x: l(v) = 1, Delta = -1, z = 0.96.
    const auto inst = one_dim(-1.0, -1.0);
    auto st = sham::SolverState::start(scalar(4.0));
    sham::Rng rng(0);
    sham::sham_step(inst, st, cfg, sampler, rng);
    CHECK(st.v(0) == 0.0);
    CHECK(st.z(0) == doctest::Approx(0.96).epsilon(1e-15));
    CHECK(st.x(0) == doctest::Approx(0.96).epsilon(1e-15));
    CHECK(st.last_alpha == 1.0);
    CHECK(st.grad_norm_max == 4.0);
    CHECK(st.last_step_norm_sq == doctest::Approx(3.04 * 3.04));
  }
}

TEST_CASE("affine constraints make the anchor choice irrelevant") {
  auto d = sham::generate_qcqp(5, 1, 0.0, 3);
  Matrix A(3, 5);
  Vector b(3);
  sham::Rng gen(8);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 5; ++j) A(i, j) = gen.normal();
    b(i) = -0.5;
  }
  auto f = std::make_shared<sham::QuadraticObjective>(d.Q_f, d.q_f, 0.0,
                                                      d.L_f, 0.0);
  auto inst = sham::make_instance(
      f, std::make_shared<sham::AffineConstraints>(A, b),
      std::make_shared<sham::BoxSet>(sham::BoxSet::symmetric(5, 1e3)));
  SolverConfig c1;
  c1.schedule = StepsizeSchedule::convex_choice2(1.0 / d.L_f, d.L_f);
  SolverConfig c0 = c1;
  c0.gamma = 0.0;
  const auto sampler = sham::Sampler::uniform(3);
  auto s0 = sham::SolverState::start(Vector::Constant(5, 2.0));
  auto s1 = s0;
  sham::Rng r0(5), r1(5);
  for (int k = 0; k < 200; ++k) {
    sham::sham_step(inst, s0, c0, sampler, r0);
    sham::sham_step(inst, s1, c1, sampler, r1);
    CHECK((s0.z - s1.z).norm() <= 1e-12 * (1.0 + s1.z.norm()));
    s0.x = s1.x;  // keep both runs on the same trajectory
  }
}

TEST_CASE("with gamma = 1 the constraint step is a Polyak step") {
  const auto d = sham::generate_qcqp(6, 8, 0.0, 12);
  const auto inst = sham::make_instance(d);
  SolverConfig c;
  c.schedule = StepsizeSchedule::convex_choice2(1.0 / d.L_f, d.L_f);
  const auto sampler = sham::Sampler::uniform(8);
  auto st = sham::SolverState::start(Vector::Zero(6));
  sham::Rng rng(1);
  for (int k = 0; k < 300; ++k) {
    sham::sham_step(inst, st, c, sampler, rng);
    const double h = inst.constraints->value(st.last_j, st.v);
    const Vector g = inst.constraints->subgradient(st.last_j, st.v);
    const double expected = c.beta * std::max(h, 0.0) / g.norm();
    CHECK((st.z - st.v).norm() ==
          doctest::Approx(expected).epsilon(1e-10).scale(1e-12));
    CHECK(inst.simple_set->contains(st.x));
  }
  CHECK(std::isfinite(st.grad_norm_max));
}

TEST_CASE("averages match a recomputation from the stored history") {
  const auto d = sham::generate_qcqp(4, 5, 2.0, 21);
  const auto inst = sham::make_instance(d);
  for (bool strongly : {false, true}) {
    SolverConfig c;
    c.schedule = strongly
                     ? StepsizeSchedule::strongly_convex_switching(d.L_f, 2.0)
                     : StepsizeSchedule::convex_choice2(1.0 / d.L_f, d.L_f);
    c.stopping.reset();
    sham::Solver solver(inst, c, Vector::Constant(4, 0.3));
    std::vector<Vector> xs;
    std::vector<double> alphas;
    for (int k = 0; k < 60; ++k) {
      solver.step();
      xs.push_back(solver.state().x);
      alphas.push_back(solver.state().last_alpha);
    }
    Vector num = Vector::Zero(4);
    double den = 0.0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
      num += alphas[t] * xs[t];
      den += alphas[t];
    }
    const Vector cvx = sham::averaged_iterate(solver.state(),
                                              sham::AverageMode::kConvex);
    CHECK((cvx - num / den).norm() <= 1e-12 * (1 + cvx.norm()));

    if (strongly) {
      const std::int64_t k0 = *c.schedule.switching_point();
      Vector snum = Vector::Zero(4);
      double sden = 0.0;
      for (std::size_t t = 0; t < xs.size(); ++t) {
        if (static_cast<std::int64_t>(t) <= k0) continue;
        const double w = double(t + 1) * double(t + 1);
        snum += w * xs[t];
        sden += w;
      }
      const Vector sc = sham::averaged_iterate(
          solver.state(), sham::AverageMode::kStronglyConvex);
      CHECK((sc - snum / sden).norm() <= 1e-12 * (1 + sc.norm()));
    } else {
      CHECK_THROWS_AS(sham::averaged_iterate(
                          solver.state(), sham::AverageMode::kStronglyConvex),
                      sham::Error);
    }
  }
}

TEST_CASE("averaged_iterate on hand-built accumulators") {
  auto st = sham::SolverState::start(Vector::Zero(2));
  CHECK_THROWS_AS(sham::averaged_iterate(st, sham::AverageMode::kConvex),
                  sham::Error);
  Vector x1(2), x2(2);
  x1 << 1, 0;
  x2 << 0, 1;
  st.convex_weight = 1.0;
  st.convex_sum = 0.5 * x1 + 0.5 * x2;
  const Vector a = sham::averaged_iterate(st, sham::AverageMode::kConvex);
  CHECK(a(0) == 0.5);
  CHECK(a(1) == 0.5);
  // k0 = 1: terms t = 2, 3 with weights 9 and 16.
  st.sc_active = true;
  st.sc_weight = 25.0;
  st.sc_sum = 9.0 * x1 + 16.0 * x2;
  const Vector s = sham::averaged_iterate(st, sham::AverageMode::kStronglyConvex);
  CHECK(s(0) == doctest::Approx(9.0 / 25.0));
  CHECK(s(1) == doctest::Approx(16.0 / 25.0));
}

TEST_CASE("a switching point below zero starts the average at k = 0") {
  const auto s = StepsizeSchedule::strongly_convex_switching(0.4, 1.0);
  CHECK(*s.switching_point() == -1);
  const auto inst = one_dim(-1.0, -1.0);
  SolverConfig c = one_dim_config();
  c.schedule = s;
  sham::Solver solver(inst, c, scalar(4.0));
  solver.step();
  CHECK(solver.state().sc_active);
  CHECK(solver.state().sc_weight == 1.0);
}

TEST_CASE("run: unconstrained strongly convex problem reaches -Q^-1 q") {
  auto d = sham::generate_qcqp(5, 1, 1.0, 9);
  // A far-away constraint that never binds near the minimizer.
  Matrix A = Matrix::Zero(1, 5);
  A(0, 0) = 1.0;
  auto f = std::make_shared<sham::QuadraticObjective>(d.Q_f, d.q_f, 0.0,
                                                      d.L_f, 1.0);
  auto inst = sham::make_instance(
      f, std::make_shared<sham::AffineConstraints>(A, Vector::Constant(1, 500.0)),
      std::make_shared<sham::BoxSet>(sham::BoxSet::symmetric(5, 1e3)));
  SolverConfig c;
  c.schedule = StepsizeSchedule::strongly_convex_switching(d.L_f, 1.0);
  c.stopping.reset();
  c.max_iterations = 20000;
  const auto r = sham::run(inst, c, Vector::Zero(5));
  const Vector xstar = d.Q_f.ldlt().solve(-d.q_f);
  CHECK((r.state.x - xstar).norm() <= 1e-2);
  CHECK(r.budget_exhausted());
}

TEST_CASE("run: one-dimensional problem converges to x* = 1") {
  const auto inst = one_dim(-1.0, -1.0);
  SolverConfig c = one_dim_config();
  c.max_iterations = 20000;
  const auto r = sham::run(inst, c, scalar(4.0));
  CHECK(std::abs(r.state.x(0) - 1.0) <= 1e-2);
  CHECK(std::abs(inst.objective->value(r.state.x) - 0.5) <= 1e-2);
}

TEST_CASE("run: records, stride, budget edge and determinism") {
  const auto d = sham::generate_qcqp(5, 7, 0.0, 2);
  const auto inst = sham::make_instance(d);
  SolverConfig c;
  c.schedule = StepsizeSchedule::convex_choice2(1.0 / d.L_f, d.L_f);
  c.stopping.reset();
  c.max_iterations = 100;
  c.record_every = 7;
  c.seed = 31;
  const auto a = sham::run(inst, c, Vector::Zero(5));
  const auto b = sham::run(inst, c, Vector::Zero(5));
  CHECK(a.records == b.records);
  REQUIRE(a.records.size() == 15);  // 7, 14, ..., 98 and the final 100
  CHECK(a.records.front().k == 7);
  CHECK(a.records.back().k == 100);
  for (std::size_t i = 1; i < a.records.size(); ++i)
    CHECK(a.records[i].k > a.records[i - 1].k);

  c.max_iterations = 1;
  c.record_every = 1;
  const auto one = sham::run(inst, c, Vector::Zero(5));
  CHECK(one.records.size() == 1);
  CHECK(one.reason == sham::StopReason::kBudgetExhausted);

  // x0 outside Y is projected first.
  c.max_iterations = 3;
  const auto far = sham::run(inst, c, Vector::Constant(5, 5e3));
  CHECK(inst.simple_set->contains(far.state.x));
}

TEST_CASE("run stops with the converged reason when f* is known") {
  const auto inst = one_dim(-1.0, -1.0);
  SolverConfig c = one_dim_config();
  sham::StoppingCriteria s;
  s.fstar = 0.5;
  c.stopping = s;
  const auto r = sham::run(inst, c, scalar(4.0));
  CHECK(r.reason == sham::StopReason::kConverged);
  CHECK(std::string(sham::to_string(r.reason)) == "stop_converged");
  const auto& last = r.records.back();
  CHECK(last.feas_sq_last <= 1e-2);
  CHECK(std::abs(last.f_last - 0.5) <= 1e-2);
}

TEST_CASE("non-finite gradients raise a numerical error with the iteration") {
  auto f = std::make_shared<NanObjective>();
  Matrix A(1, 1);
  A << 1.0;
  auto inst = sham::make_instance(
      f, std::make_shared<sham::AffineConstraints>(A, scalar(100.0)),
      std::make_shared<sham::BoxSet>(sham::BoxSet::symmetric(1, 1e3)));
  SolverConfig c = one_dim_config();
  c.schedule = StepsizeSchedule::convex_choice2(0.25, 1.0);
  try {
    sham::run(inst, c, scalar(0.0));
    FAIL("expected a numerical error");
  } catch (const sham::NumericalError& e) {
    CHECK(e.iteration() == 2);
    CHECK(e.quantity() == "gradient");
    CHECK(e.code() == sham::ErrorCode::kNumericalFailure);
  }
}
