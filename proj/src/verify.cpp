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

#include "sham/verify.hpp"

#include "sham/experiments.hpp"
#include "sham/oracles.hpp"
#include "sham/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace sham::verify {

namespace {

using Clock = std::chrono::steady_clock;

Vector random_vector(Rng& rng, Index n, double lo, double hi) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

Vector normal_vector(Rng& rng, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

template <typename Body>
SuiteResult timed(const char* name, Body&& body) {
  SuiteResult r;
  r.name = name;
  const auto t0 = Clock::now();
  std::ostringstream detail;
  try {
    r.passed = body(detail);
  } catch (const std::exception& e) {
    r.passed = false;
    detail << "exception: " << e.what();
  }
  r.detail = detail.str();
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::shared_ptr<const ObjectiveOracle> shifted_identity(const Vector& c) {
  const Index n = c.size();
  return std::make_shared<QuadraticObjective>(Matrix::Identity(n, n), -c,
                                              0.5 * c.squaredNorm(), 1.0, 1.0);
}

std::shared_ptr<const SimpleSet> default_box(Index n) {
  return std::make_shared<BoxSet>(BoxSet::symmetric(n, kDefaultBoxRadius));
}

// Two halfspaces a_i'x <= b_i in the plane.
const Matrix& two_halfspace_normals() {
  static const Matrix A = (Matrix(2, 2) << 1.0, 1.0, 1.0, -1.0).finished();
  return A;
}
const Vector& two_halfspace_offsets() {
  static const Vector b = (Vector(2) << 1.0, 0.5).finished();
  return b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact-distance instances

const char* to_string(ExactDistanceCase c) {
  switch (c) {
    case ExactDistanceCase::kHalfspace: return "single halfspace";
    case ExactDistanceCase::kBall: return "single ball";
    case ExactDistanceCase::kTwoHalfspaces: return "two halfspaces";
  }
  return "unknown";
}

ProblemInstance exact_distance_instance(ExactDistanceCase c) {
  switch (c) {
    case ExactDistanceCase::kHalfspace: {
      Matrix A(1, 2);
      A << 1.0, 2.0;
      Vector b(1);
      b << 1.0;
      return make_instance(shifted_identity(Vector::Constant(2, 5.0)),
                           std::make_shared<AffineConstraints>(A, b),
                           default_box(2));
    }
    case ExactDistanceCase::kBall: {
      SocConstraintData ball{Matrix::Identity(2, 2), Vector::Zero(2),
                             Vector::Zero(2), 1.0};
      Vector c(2);
      c << 3.0, -2.0;
      return make_instance(
          shifted_identity(c),
          std::make_shared<SocConstraints>(std::vector{ball}), default_box(2));
    }
    case ExactDistanceCase::kTwoHalfspaces: {
      Vector c(2);
      c << 4.0, 1.0;
      return make_instance(
          shifted_identity(c),
          std::make_shared<AffineConstraints>(two_halfspace_normals(),
                                              two_halfspace_offsets()),
          default_box(2));
    }
  }
  throw Error(ErrorCode::kInvalidInput, "unknown exact-distance case");
}

double exact_distance(ExactDistanceCase c, const Vector& x) {
  switch (c) {
    case ExactDistanceCase::kHalfspace:
      return positive_part(x(0) + 2.0 * x(1) - 1.0) / std::sqrt(5.0);
    case ExactDistanceCase::kBall:
      return positive_part(x.norm() - 1.0);
    case ExactDistanceCase::kTwoHalfspaces: {
      const Matrix& A = two_halfspace_normals();
      const Vector& b = two_halfspace_offsets();
      const auto inside = [&](const Vector& p, Index i) {
        return A.row(i).dot(p) <= b(i) + 1e-15;
      };
      if (inside(x, 0) && inside(x, 1)) return 0.0;
      // The projection has active set {0}, {1} or {0, 1}; each candidate is
      // feasible, so the nearest feasible candidate is the projection.
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < 2; ++i) {
        const double viol = A.row(i).dot(x) - b(i);
        const Vector p =
            x - (viol / A.row(i).squaredNorm()) * A.row(i).transpose();
        if (inside(p, 1 - i)) best = std::min(best, (x - p).norm());
      }
      const Vector vertex = A.partialPivLu().solve(b);
      return std::min(best, (x - vertex).norm());
    }
  }
  return 0.0;
}

DistanceLemmaOutcome check_distance_lemma(
    const ProblemInstance& instance,
    const std::function<double(const Vector&)>& distance, double beta,
    double gamma, std::uint64_t iterations, std::uint64_t seed, double slack) {
  SolverConfig cfg;
  cfg.beta = beta;
  cfg.gamma = gamma;
  const double L = instance.objective->smoothness();
  cfg.schedule = StepsizeSchedule::convex_choice2(1.0 / L, L);
  cfg.seed = seed;
  cfg.stopping.reset();
  cfg.max_iterations = iterations;
  Solver solver(instance, cfg, Vector::Zero(instance.dimension));
  DistanceLemmaOutcome out;
  for (std::uint64_t k = 0; k < iterations; ++k) {
    solver.step();
    const double after = distance(solver.state().x);
    const double before = distance(solver.state().v);
    ++out.checks;
    out.worst_excess = std::max(out.worst_excess, after - before);
    if (after > before + slack) ++out.violations;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suites

SuiteResult subgradient_inequalities(const Options& options) {
  return timed("subgradient-inequality", [&](std::ostringstream& detail) {
    Rng rng(options.seed);
    struct Family {
      std::string name;
      std::shared_ptr<const ConstraintOracle> oracle;
      double radius;
    };
    std::vector<Family> families;
    {
      const QcqpData d = generate_qcqp(5, 4, 0.0, options.seed);
      families.push_back(
          {"soc-generated", std::make_shared<SocConstraints>(d.constraints),
           kDefaultBoxRadius});
    }
    families.push_back(
        {"soc-ball",
         std::make_shared<SocConstraints>(std::vector{SocConstraintData{
             Matrix::Identity(3, 3), Vector::Zero(3), Vector::Zero(3), 1.0}}),
         10.0});
    {
      Matrix A(6, 4);
      for (Index i = 0; i < A.size(); ++i) A.data()[i] = rng.normal();
      families.push_back(
          {"affine",
           std::make_shared<AffineConstraints>(A, normal_vector(rng, 6)),
           100.0});
    }
    families.push_back(
        {"box", std::make_shared<BoxConstraints>(Vector::Constant(3, -1.0),
                                                 Vector::Constant(3, 2.0)),
         10.0});
    {
      std::vector<std::shared_ptr<const ConstraintOracle>> parts{
          std::make_shared<SocConstraints>(std::vector{SocConstraintData{
              Matrix::Identity(2, 2), Vector::Zero(2), Vector::Ones(2), 1.0}}),
          std::make_shared<BoxConstraints>(Vector::Constant(2, -1.0),
                                           Vector::Constant(2, 1.0))};
      families.push_back(
          {"composite", std::make_shared<CompositeConstraints>(parts), 10.0});
    }

    bool ok = true;
    for (const auto& fam : families) {
      const auto& h = *fam.oracle;
      const Index n = h.dimension();
      double worst = 0.0;
      for (std::size_t t = 0; t < options.subgradient_triples; ++t) {
        // Every tenth anchor is the origin, a kink of the ball-type families.
        const Vector x = t % 10 == 0 ? Vector::Zero(n)
                                     : random_vector(rng, n, -fam.radius,
                                                     fam.radius);
        const Vector y = random_vector(rng, n, -fam.radius, fam.radius);
        const auto j = static_cast<std::size_t>(rng.uniform_index(h.count()));
        const double hx = h.value(j, x);
        const double hy = h.value(j, y);
        const Vector g = h.subgradient(j, x);
        const double cut = hx + g.dot(y - x);
        const double scale =
            1.0 + std::abs(hx) + std::abs(hy) + g.norm() * (y - x).norm();
        worst = std::max(worst, (cut - hy) / scale);
      }
      detail << fam.name << ": worst relative violation " << worst
             << ", B_h " << h.max_subgradient_norm_seen() << "; ";
      if (worst > 1e-10) ok = false;
    }
    return ok;
  });
}

SuiteResult halfspace_identities(const Options& options) {
  return timed("halfspace-identities", [&](std::ostringstream& detail) {
    Rng rng(options.seed + 1);
    const double betas[] = {0.1, 0.5, 0.96, 1.0, 1.5, 1.9};
    double worst_combo = 0.0, worst_proj = 0.0, worst_fejer = 0.0;
    bool zero_branch_ok = true;
    for (std::size_t t = 0; t < options.identity_cases; ++t) {
      const auto n = static_cast<Index>(1 + rng.uniform_index(6));
      ConstraintLinearization lin;
      lin.anchor = random_vector(rng, n, -10.0, 10.0);
      lin.subgradient = normal_vector(rng, n);
      lin.value = rng.uniform(-5.0, 5.0);
      const Vector v = random_vector(rng, n, -10.0, 10.0);

      // Closed-form halfspace projection, written out independently.
      const double lv = lin.value + lin.subgradient.dot(v - lin.anchor);
      const Vector proj =
          lv > 0.0 ? Vector(v - (lv / lin.subgradient.squaredNorm()) *
                                    lin.subgradient)
                   : v;
      const double scale = 1.0 + v.norm() + (v - proj).norm();

      worst_proj = std::max(worst_proj,
                            (options.step(lin, v, 1.0) - proj).norm() / scale);
      for (double beta : betas) {
        const Vector z = options.step(lin, v, beta);
        const Vector combo = (1.0 - beta) * v + beta * proj;
        worst_combo = std::max(worst_combo, (z - combo).norm() / scale);
        if (beta < 2.0) {
          // A point of the halfspace: the projection of a random point.
          const Vector r = random_vector(rng, n, -10.0, 10.0);
          const double lr = lin.value + lin.subgradient.dot(r - lin.anchor);
          const Vector q =
              lr > 0.0 ? Vector(r - (lr / lin.subgradient.squaredNorm()) *
                                        lin.subgradient)
                       : r;
          worst_fejer = std::max(
              worst_fejer, ((z - q).norm() - (v - q).norm()) / scale);
        }
      }

      ConstraintLinearization flat = lin;
      flat.subgradient.setZero();
      flat.value = 3.0;
      if (options.step(flat, v, 0.96) != v) zero_branch_ok = false;
    }
    detail << "step vs convex combination " << worst_combo
           << ", beta=1 vs projection " << worst_proj << ", Fejer excess "
           << worst_fejer << ", zero-subgradient branch "
           << (zero_branch_ok ? "ok" : "FAILED");
    return worst_combo <= 1e-12 && worst_proj <= 1e-12 &&
           worst_fejer <= 1e-12 && zero_branch_ok;
  });
}

SuiteResult distance_lemma(const Options& options) {
  return timed("distance-lemma", [&](std::ostringstream& detail) {
    bool ok = true;
    std::uint64_t checks = 0;
    for (auto c : {ExactDistanceCase::kHalfspace, ExactDistanceCase::kBall,
                   ExactDistanceCase::kTwoHalfspaces}) {
      const ProblemInstance inst = exact_distance_instance(c);
      const auto dist = [c](const Vector& x) { return exact_distance(c, x); };
      for (double beta : options.lemma_betas) {
        for (double gamma : options.lemma_gammas) {
          for (std::uint64_t s = 0; s < options.lemma_seeds; ++s) {
            const auto out =
                check_distance_lemma(inst, dist, beta, gamma,
                                     options.lemma_iterations,
                                     options.seed + s, 0.0);
            checks += out.checks;
            if (out.violations) {
              ok = false;
              detail << to_string(c) << " beta=" << beta << " gamma=" << gamma
                     << " seed=" << options.seed + s << ": " << out.violations
                     << " violations (worst excess " << out.worst_excess
                     << "); ";
            }
          }
        }
      }
    }
    // Generated instance: both sides use the same feasibility-restoration
    // upper bound, compared with slack 1e-6.
    const ProblemInstance gen = generate_instance(2, 3, 0.0, options.seed);
    const auto approx = [&](const Vector& x) {
      return distance_to_feasible(gen, x, 1e-8);
    };
    for (double beta : options.lemma_betas) {
      const auto out = check_distance_lemma(gen, approx, beta, 1.0, 200,
                                            options.seed, 1e-6);
      checks += out.checks;
      if (out.violations) {
        ok = false;
        detail << "generated beta=" << beta << ": " << out.violations
               << " violations (worst excess " << out.worst_excess << "); ";
      }
    }
    detail << checks << " iterations checked";
    return ok;
  });
}

SuiteResult stepsize_schedules(const Options&) {
  return timed("stepsize-schedules", [&](std::ostringstream& detail) {
    bool ok = switching_index(10.0, 1.0) == 19 && switching_index(1.0, 1.0) == 1 &&
              switching_index(0.4, 1.0) == -1;
    const auto sw = StepsizeSchedule::strongly_convex_switching(10.0, 1.0);
    for (std::uint64_t k = 0; k <= 1000; ++k) {
      const double expect = static_cast<std::int64_t>(k) <= 19
                                ? 1.0 / 10.0
                                : 2.0 / (1.0 * (static_cast<double>(k) + 1.0));
      if (sw(k) != expect) ok = false;
    }
    const StepsizeSchedule all[] = {
        StepsizeSchedule::convex_choice1(0.5, 2.0),
        StepsizeSchedule::convex_choice1_paper_v(0.5, 2.0),
        StepsizeSchedule::convex_choice2(0.5, 2.0), sw,
        StepsizeSchedule::strongly_convex_switching(1.0, 3.0)};
    for (const auto& s : all) {
      for (std::uint64_t k = 1; k < 100000; ++k) {
        if (!(s(k) > 0.0) || s(k + 1) > s(k)) {
          ok = false;
          detail << to_string(s.kind()) << " not monotone at k=" << k << "; ";
          break;
        }
      }
    }
    detail << "switching and monotonicity checks " << (ok ? "ok" : "FAILED");
    return ok;
  });
}

SuiteResult sampler_frequencies(const Options& options) {
  return timed("sampler", [&](std::ostringstream& detail) {
    bool ok = Sampler::uniform(7).rho() == 1.0;
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    const auto weighted = Sampler::with_probabilities(p);
    ok = ok && weighted.rho() == 4.0 * 0.1;
    const std::uint64_t N = 100000;
    for (const Sampler& s : {Sampler::uniform(7), weighted}) {
      Rng rng(options.seed + 7);
      std::vector<std::uint64_t> counts(s.size(), 0);
      for (std::uint64_t i = 0; i < N; ++i) ++counts[s.sample(rng)];
      for (std::size_t j = 0; j < s.size(); ++j) {
        const double pj = s.probability(j);
        const double freq = static_cast<double>(counts[j]) / double(N);
        const double bound = 3.0 * std::sqrt(pj * (1.0 - pj) / double(N));
        if (std::abs(freq - pj) > bound) {
          ok = false;
          detail << "index " << j << " frequency " << freq << " vs " << pj
                 << "; ";
        }
      }
    }
    detail << "frequencies within 3 sigma: " << (ok ? "yes" : "no");
    return ok;
  });
}

SuiteResult box_projection(const Options& options) {
  return timed("box-projection", [&](std::ostringstream& detail) {
    Rng rng(options.seed + 3);
    bool ok = true;
    double worst = 0.0;
    for (int t = 0; t < 2000; ++t) {
      const Vector lo = random_vector(rng, 4, -3.0, 0.0);
      const Vector hi = lo + random_vector(rng, 4, 0.0, 3.0);
      const Vector p = random_vector(rng, 4, -10.0, 10.0);
      const Vector pr = project_box(lo, hi, p);
      if (project_box(lo, hi, pr) != pr) ok = false;
      for (int s = 0; s < 10; ++s) {
        Vector q(4);
        for (Index i = 0; i < 4; ++i) q(i) = rng.uniform(lo(i), hi(i));
        worst = std::max(worst, (pr - q).norm() - (p - q).norm());
      }
    }
    detail << "idempotent " << (ok ? "yes" : "no") << ", nonexpansive excess "
           << worst;
    return ok && worst <= 1e-12;
  });
}

SuiteResult stopping_rules(const Options&) {
  return timed("stopping-criteria", [&](std::ostringstream& detail) {
    StoppingCriteria with_fstar;
    with_fstar.fstar = 1.0;
    const std::vector<double> none;
    // Exactly at both thresholds: f* = 0 keeps the gap exactly 1e-2.
    StoppingCriteria zero_fstar;
    zero_fstar.fstar = 0.0;
    bool ok =
        stopping_check({1e-2, 1e-2, none}, zero_fstar) ==
            StopDecision::kConverged &&
        stopping_check({std::nextafter(1e-2, 1.0), 1e-2, none}, zero_fstar) ==
            StopDecision::kContinue &&
        stopping_check({0.005, 1.005, none}, with_fstar) ==
            StopDecision::kConverged &&
        stopping_check({0.05, 1.0, none}, with_fstar) ==
            StopDecision::kContinue &&
        stopping_check({0.0, 1.5, none}, with_fstar) == StopDecision::kContinue;
    StoppingCriteria no_fstar;
    const std::vector<double> small(10, 1e-4), at_tol(10, 1e-3);
    std::vector<double> one_big(10, 1e-4);
    one_big[0] = 2e-3;
    std::vector<double> old_big(11, 1e-4);
    old_big[0] = 1.0;
    ok = ok &&
         stopping_check({1.0, 0.0, small}, no_fstar) ==
             StopDecision::kStagnated &&
         stopping_check({1.0, 0.0, at_tol}, no_fstar) ==
             StopDecision::kStagnated &&
         stopping_check({1.0, 0.0, one_big}, no_fstar) ==
             StopDecision::kContinue &&
         stopping_check({1.0, 0.0, old_big}, no_fstar) ==
             StopDecision::kStagnated &&
         stopping_check({1.0, 0.0, std::span(small).first(9)}, no_fstar) ==
             StopDecision::kContinue;
    detail << "branch table " << (ok ? "ok" : "FAILED");
    return ok;
  });
}

std::vector<std::uint64_t> log_checkpoints(std::uint64_t from, std::uint64_t to,
                                           std::size_t count) {
  require(from >= 1 && to >= from && count >= 2, ErrorCode::kInvalidInput,
          "log_checkpoints: bad range");
  std::vector<std::uint64_t> ks;
  const double a = std::log(double(from)), b = std::log(double(to));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = a + (b - a) * double(i) / double(count - 1);
    const auto k = static_cast<std::uint64_t>(std::llround(std::exp(t)));
    if (ks.empty() || k > ks.back()) ks.push_back(std::min(k, to));
  }
  ks.back() = to;
  return ks;
}

RateCurve average_over_seeds(const ProblemInstance& instance,
                             const SolverConfig& base, double fstar,
                             std::uint64_t seeds,
                             const std::vector<std::uint64_t>& checkpoints) {
  RateCurve curve;
  curve.ks = checkpoints;
  curve.mean_gap.assign(checkpoints.size(), 0.0);
  curve.mean_feas_sq.assign(checkpoints.size(), 0.0);
  curve.mean_feas_sq_last.assign(checkpoints.size(), 0.0);
  const AverageMode mode = primary_average_mode(base);
  for (std::uint64_t s = 0; s < seeds; ++s) {
    SolverConfig cfg = base;
    cfg.seed = base.seed + s;
    cfg.stopping.reset();
    Solver solver(instance, cfg, Vector::Zero(instance.dimension));
    std::size_t next = 0;
    while (next < checkpoints.size()) {
      solver.step();
      if (solver.state().k != checkpoints[next]) continue;
      const Vector avg = averaged_iterate(solver.state(), mode);
      curve.mean_gap[next] += std::abs(instance.objective->value(avg) - fstar);
      curve.mean_feas_sq[next] += feasibility_sq(instance, avg);
      curve.mean_feas_sq_last[next] +=
          feasibility_sq(instance, solver.state().x);
      ++next;
    }
  }
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    curve.mean_gap[i] /= double(seeds);
    curve.mean_feas_sq[i] /= double(seeds);
    curve.mean_feas_sq_last[i] /= double(seeds);
  }
  return curve;
}

SuiteResult rate_fits(const Options& options) {
  return timed("rate-fits", [&](std::ostringstream& detail) {
    std::vector<std::uint64_t> ks;
    std::vector<double> sqrt_law, inv_law;
    for (std::uint64_t k = 1; k <= 1000; ++k) {
      ks.push_back(k);
      sqrt_law.push_back(1.0 / std::sqrt(double(k)));
      inv_law.push_back(5.0 / double(k));
    }
    const double s1 = rate_fit(ks, sqrt_law, kDefaultRateBurnIn);
    const double s2 = rate_fit(ks, inv_law, kDefaultRateBurnIn);
    bool ok = std::abs(s1 + 0.5) <= 1e-9 && std::abs(s2 + 1.0) <= 1e-9;
    detail << "synthetic slopes " << s1 << ", " << s2;
    if (!options.include_rate_runs) return ok;

    // Scaled-down end-to-end runs.
    const auto checkpoints = log_checkpoints(500, 20000, 25);
    {
      const ProblemInstance inst = generate_instance(10, 20, 0.0, options.seed);
      const double fstar = baseline_solver(inst, 200000).fstar_estimate;
      SolverConfig cfg;
      const double L = inst.objective->smoothness();
      cfg.schedule = StepsizeSchedule::convex_choice2(1.0 / L, L);
      cfg.seed = options.seed;
      const RateCurve c = average_over_seeds(inst, cfg, fstar, 5, checkpoints);
      const double slope = rate_fit(c.ks, c.mean_gap, 0);
      detail << "; convex gap slope " << slope;
      ok = ok && slope <= -0.35;
    }
    {
      const ProblemInstance inst = generate_instance(10, 20, 1.0, options.seed);
      const double fstar = baseline_solver(inst, 200000).fstar_estimate;
      SolverConfig cfg;
      cfg.schedule = StepsizeSchedule::strongly_convex_switching(
          inst.objective->smoothness(), 1.0);
      cfg.seed = options.seed;
      const RateCurve c = average_over_seeds(inst, cfg, fstar, 5, checkpoints);
      const double slope = rate_fit(c.ks, c.mean_gap, 0);
      detail << "; strongly convex gap slope " << slope;
      ok = ok && slope <= -0.8;
    }
    return ok;
  });
}

std::vector<SuiteResult> run_all(const Options& options) {
  return {subgradient_inequalities(options), halfspace_identities(options),
          distance_lemma(options),           stepsize_schedules(options),
          sampler_frequencies(options),      box_projection(options),
          stopping_rules(options),           rate_fits(options)};
}

}  // namespace sham::verify
