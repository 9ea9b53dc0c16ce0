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

#include "sham/problem.hpp"

#include "sham/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace sham {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kInvalidConfig: return "invalid config";
    case ErrorCode::kNumericalFailure: return "numerical failure";
    case ErrorCode::kNotReady: return "not ready";
    case ErrorCode::kUnsupportedDimension: return "unsupported dimension";
    case ErrorCode::kInfeasibleGrid: return "infeasible grid";
    case ErrorCode::kOracleFailure: return "oracle failure";
    case ErrorCode::kDegenerateSample: return "degenerate sample";
    case ErrorCode::kDegenerateConstant: return "degenerate constant";
    case ErrorCode::kInvalidData: return "invalid data";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

// ---------------------------------------------------------------------------
// Objective

QuadraticObjective::QuadraticObjective(Matrix Q, Vector q, double constant,
                                       double smoothness,
                                       double strong_convexity)
    : Q_(std::move(Q)),
      q_(std::move(q)),
      constant_(constant),
      smoothness_(smoothness),
      strong_convexity_(strong_convexity) {
  require(Q_.rows() == Q_.cols() && Q_.rows() == q_.size(),
          ErrorCode::kInvalidInput, "quadratic objective: dimension mismatch");
  require(smoothness_ > 0.0 && strong_convexity_ >= 0.0 &&
              strong_convexity_ <= smoothness_,
          ErrorCode::kInvalidInput,
          "quadratic objective: need 0 <= mu <= L_f and L_f > 0");
}

QuadraticObjective QuadraticObjective::with_exact_constants(Matrix Q, Vector q,
                                                            double constant) {
  require(Q.rows() == Q.cols() && Q.rows() > 0, ErrorCode::kInvalidInput,
          "quadratic objective: Q must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Q, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = std::max(0.0, eig.eigenvalues().minCoeff());
  return QuadraticObjective(std::move(Q), std::move(q), constant, lmax, lmin);
}

double QuadraticObjective::value(const Vector& x) const {
  return 0.5 * x.dot(Q_ * x) + q_.dot(x) + constant_;
}

Vector QuadraticObjective::gradient(const Vector& x) const {
  return Q_ * x + q_;
}

// ---------------------------------------------------------------------------
// Constraint families

void ConstraintOracle::check(std::size_t j, const Vector& x) const {
  require(j < count(), ErrorCode::kInvalidInput,
          "constraint index " + std::to_string(j) + " out of range [0, " +
              std::to_string(count()) + ")");
  require(x.size() == dimension(), ErrorCode::kInvalidInput,
          "constraint oracle: dimension mismatch");
}

double ConstraintOracle::value(std::size_t j, const Vector& x) const {
  check(j, x);
  return do_value(j, x);
}

Vector ConstraintOracle::subgradient(std::size_t j, const Vector& x) const {
  check(j, x);
  Vector g = do_subgradient(j, x);
  const double norm = g.norm();
  if (std::isfinite(norm)) {
    double seen = max_norm_.load(std::memory_order_relaxed);
    while (norm > seen &&
           !max_norm_.compare_exchange_weak(seen, norm,
                                            std::memory_order_relaxed)) {
    }
  }
  return g;
}

void SocConstraintData::validate() const {
  require(Q.cols() == q.size() && Q.rows() == a.size(),
          ErrorCode::kInvalidInput, "SOC constraint: dimension mismatch");
}

double soc_value(const SocConstraintData& data, const Vector& x) {
  require(x.size() == data.dimension() && data.Q.cols() == x.size() &&
              data.Q.rows() == data.a.size(),
          ErrorCode::kInvalidInput, "soc_value: dimension mismatch");
  return (data.Q * x + data.a).norm() - data.q.dot(x) - data.b;
}

Vector soc_subgradient(const SocConstraintData& data, const Vector& x) {
  require(x.size() == data.dimension() && data.Q.cols() == x.size() &&
              data.Q.rows() == data.a.size(),
          ErrorCode::kInvalidInput, "soc_subgradient: dimension mismatch");
  const Vector r = data.Q * x + data.a;
  const double norm = r.norm();
  // At r = 0 the zero element of the norm's subdifferential is selected.
  if (norm > 0.0) return data.Q.transpose() * (r / norm) - data.q;
  return -data.q;
}

SocConstraints::SocConstraints(std::vector<SocConstraintData> constraints)
    : constraints_(std::move(constraints)), dimension_(0) {
  require(!constraints_.empty(), ErrorCode::kInvalidInput,
          "SOC family needs at least one constraint");
  dimension_ = constraints_.front().dimension();
  for (const auto& c : constraints_) {
    c.validate();
    require(c.dimension() == dimension_, ErrorCode::kInvalidInput,
            "SOC family: constraints of different dimension");
  }
}

double SocConstraints::do_value(std::size_t j, const Vector& x) const {
  return soc_value(constraints_[j], x);
}

Vector SocConstraints::do_subgradient(std::size_t j, const Vector& x) const {
  return soc_subgradient(constraints_[j], x);
}

AffineConstraints::AffineConstraints(Matrix A, Vector b)
    : A_(std::move(A)), b_(std::move(b)) {
  require(A_.rows() == b_.size() && A_.rows() > 0, ErrorCode::kInvalidInput,
          "affine family: A rows must match b");
}

double AffineConstraints::do_value(std::size_t j, const Vector& x) const {
  return A_.row(static_cast<Index>(j)).dot(x) - b_(static_cast<Index>(j));
}

Vector AffineConstraints::do_subgradient(std::size_t j, const Vector&) const {
  return A_.row(static_cast<Index>(j)).transpose();
}

BoxConstraints::BoxConstraints(Vector lo, Vector hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  require(lo_.size() == hi_.size() && lo_.size() > 0, ErrorCode::kInvalidInput,
          "box family: bound sizes differ");
  require((lo_.array() <= hi_.array()).all() && lo_.allFinite() &&
              hi_.allFinite(),
          ErrorCode::kInvalidInput, "box family: need finite lo <= hi");
}

double BoxConstraints::do_value(std::size_t j, const Vector& x) const {
  const auto i = static_cast<Index>(j / 2);
  return j % 2 == 0 ? x(i) - hi_(i) : lo_(i) - x(i);
}

Vector BoxConstraints::do_subgradient(std::size_t j, const Vector&) const {
  Vector g = Vector::Zero(lo_.size());
  g(static_cast<Index>(j / 2)) = j % 2 == 0 ? 1.0 : -1.0;
  return g;
}

CompositeConstraints::CompositeConstraints(
    std::vector<std::shared_ptr<const ConstraintOracle>> parts)
    : parts_(std::move(parts)), offsets_{0}, dimension_(0) {
  require(!parts_.empty(), ErrorCode::kInvalidInput,
          "composite family needs at least one part");
  dimension_ = parts_.front()->dimension();
  for (const auto& p : parts_) {
    require(p != nullptr && p->dimension() == dimension_,
            ErrorCode::kInvalidInput, "composite family: dimension mismatch");
    offsets_.push_back(offsets_.back() + p->count());
  }
}

std::pair<const ConstraintOracle*, std::size_t> CompositeConstraints::locate(
    std::size_t j) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), j);
  const auto part = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  return {parts_[part].get(), j - offsets_[part]};
}

double CompositeConstraints::do_value(std::size_t j, const Vector& x) const {
  const auto [oracle, local] = locate(j);
  return oracle->value(local, x);
}

Vector CompositeConstraints::do_subgradient(std::size_t j,
                                            const Vector& x) const {
  const auto [oracle, local] = locate(j);
  return oracle->subgradient(local, x);
}

// ---------------------------------------------------------------------------
// Simple set

Vector project_box(const Vector& lo, const Vector& hi, const Vector& p) {
  require(lo.size() == hi.size() && lo.size() == p.size(),
          ErrorCode::kInvalidInput, "project_box: dimension mismatch");
  require((lo.array() <= hi.array()).all(), ErrorCode::kInvalidInput,
          "project_box: lo > hi");
  return p.cwiseMax(lo).cwiseMin(hi);
}

BoxSet::BoxSet(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  require(lo_.size() == hi_.size(), ErrorCode::kInvalidInput,
          "box: bound sizes differ");
  require((lo_.array() <= hi_.array()).all(), ErrorCode::kInvalidInput,
          "box: lo > hi");
}

BoxSet BoxSet::symmetric(Index n, double radius) {
  return BoxSet(Vector::Constant(n, -radius), Vector::Constant(n, radius));
}

Vector BoxSet::project(const Vector& p) const {
  require(p.size() == lo_.size(), ErrorCode::kInvalidInput,
          "box projection: dimension mismatch");
  return p.cwiseMax(lo_).cwiseMin(hi_);
}

bool BoxSet::contains(const Vector& p, double tol) const {
  if (p.size() != lo_.size()) return false;
  return ((p.array() >= lo_.array() - tol) && (p.array() <= hi_.array() + tol))
      .all();
}

// ---------------------------------------------------------------------------
// Instances

ProblemInstance make_instance(std::shared_ptr<const ObjectiveOracle> objective,
                              std::shared_ptr<const ConstraintOracle> constraints,
                              std::shared_ptr<const SimpleSet> simple_set) {
  require(objective && constraints && simple_set, ErrorCode::kInvalidInput,
          "instance: missing oracle");
  const Index n = objective->dimension();
  require(n > 0 && constraints->dimension() == n &&
              simple_set->dimension() == n,
          ErrorCode::kInvalidInput, "instance: oracle dimensions disagree");
  require(constraints->count() > 0, ErrorCode::kInvalidInput,
          "instance: at least one constraint is required");
  ProblemInstance inst;
  inst.objective = std::move(objective);
  inst.constraints = std::move(constraints);
  inst.simple_set = std::move(simple_set);
  inst.dimension = n;
  return inst;
}

double max_violation(const ProblemInstance& instance, const Vector& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < instance.constraint_count(); ++j)
    worst = std::max(worst, positive_part(instance.constraints->value(j, x)));
  return worst;
}

PowerIterationResult power_iteration(const Matrix& S, double rel_tol,
                                     int max_iterations) {
  require(S.rows() == S.cols() && S.rows() > 0, ErrorCode::kInvalidInput,
          "power iteration: matrix must be square");
  PowerIterationResult result;
  Vector v = Vector::Constant(S.rows(), 1.0 / std::sqrt(double(S.rows())));
  double previous = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    Vector w = S * v;
    const double lambda = v.dot(w);
    const double norm = w.norm();
    result.eigenvalue = lambda;
    result.iterations = it;
    if (norm == 0.0) {
      result.converged = true;
      break;
    }
    v = w / norm;
    if (it > 1 && std::abs(lambda - previous) <= rel_tol * std::abs(lambda)) {
      result.converged = true;
      break;
    }
    previous = lambda;
  }
  return result;
}

QcqpData generate_qcqp(Index n, Index m, double mu, std::uint64_t seed) {
  require(n >= 2, ErrorCode::kInvalidInput, "generate: n must be >= 2");
  require(m >= 1, ErrorCode::kInvalidInput, "generate: m must be >= 1");
  require(mu >= 0.0 && std::isfinite(mu), ErrorCode::kInvalidInput,
          "generate: mu must be finite and >= 0");

  Rng rng(seed);
  QcqpData d;
  d.dimension = n;
  d.mu = mu;
  d.seed = seed;
  d.objective_scaling = 1.0 / double(n);

  Matrix A(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) A(r, c) = rng.normal();
  d.Q_f = d.objective_scaling * (A.transpose() * A);
  d.Q_f.diagonal().array() += mu;
  // Symmetrize exactly so serialization and power iteration see the same Q_f.
  d.Q_f = (0.5 * (d.Q_f + d.Q_f.transpose())).eval();
  d.q_f.resize(n);
  for (Index i = 0; i < n; ++i) d.q_f(i) = rng.normal();

  d.constraints.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    SocConstraintData c;
    const auto rows =
        static_cast<Index>(1 + rng.uniform_index(static_cast<std::uint64_t>(n - 1)));
    c.b = rng.uniform(1.0, 2.0);
    c.Q.resize(rows, n);
    for (Index r = 0; r < rows; ++r)
      for (Index k = 0; k < n; ++k) c.Q(r, k) = rng.normal();
    c.a.resize(rows);
    for (Index r = 0; r < rows; ++r) c.a(r) = rng.normal();
    const double an = c.a.norm();
    if (an > 0.0) c.a *= 0.5 * c.b / an;
    c.q.resize(n);
    for (Index k = 0; k < n; ++k) c.q(k) = rng.normal();
    d.constraints.push_back(std::move(c));
  }

  d.box_lo = Vector::Constant(n, -kDefaultBoxRadius);
  d.box_hi = Vector::Constant(n, kDefaultBoxRadius);
  d.L_f = power_iteration(d.Q_f, 1e-8, 10000).eigenvalue;
  return d;
}

ProblemInstance make_instance(const QcqpData& data) {
  require(data.dimension >= 1 && data.Q_f.rows() == data.dimension &&
              data.q_f.size() == data.dimension,
          ErrorCode::kInvalidInput, "qcqp: objective dimension mismatch");
  auto objective = std::make_shared<QuadraticObjective>(
      data.Q_f, data.q_f, 0.0, data.L_f, data.mu);
  auto constraints = std::make_shared<SocConstraints>(data.constraints);
  auto box = std::make_shared<BoxSet>(data.box_lo, data.box_hi);
  ProblemInstance inst = make_instance(objective, constraints, box);
  inst.known_fstar = data.fstar;
  return inst;
}

}  // namespace sham
