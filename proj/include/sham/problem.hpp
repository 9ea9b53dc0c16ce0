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

#include "sham/common.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace sham {

/// Smooth convex objective f with its smoothness constant L_f and strong
/// convexity modulus mu (mu = 0 for a merely convex f).
class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;

  virtual Index dimension() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual double smoothness() const = 0;
  virtual double strong_convexity() const = 0;
};

/// f(x) = 0.5 x'Qx + q'x + c with Q symmetric positive semidefinite.
class QuadraticObjective final : public ObjectiveOracle {
 public:
  QuadraticObjective(Matrix Q, Vector q, double constant, double smoothness,
                     double strong_convexity);

  /// Takes L_f and mu from a full eigendecomposition of Q. Meant for small
  /// hand-built problems; generated instances use power iteration instead.
  static QuadraticObjective with_exact_constants(Matrix Q, Vector q,
                                                 double constant = 0.0);

  Index dimension() const override { return q_.size(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double smoothness() const override { return smoothness_; }
  double strong_convexity() const override { return strong_convexity_; }

  const Matrix& hessian() const { return Q_; }
  const Vector& linear() const { return q_; }

 private:
  Matrix Q_;
  Vector q_;
  double constant_;
  double smoothness_;
  double strong_convexity_;
};

/// Family of convex functional constraints h_j(x) <= 0, j in [0, count()).
///
/// Evaluation is const and thread safe. Every returned subgradient norm is
/// folded into a running maximum, which serves as the empirical bound B_h.
class ConstraintOracle {
 public:
  virtual ~ConstraintOracle() = default;

  virtual Index dimension() const = 0;
  virtual std::size_t count() const = 0;

  double value(std::size_t j, const Vector& x) const;
  Vector subgradient(std::size_t j, const Vector& x) const;

  double max_subgradient_norm_seen() const {
    return max_norm_.load(std::memory_order_relaxed);
  }

 protected:
  virtual double do_value(std::size_t j, const Vector& x) const = 0;
  virtual Vector do_subgradient(std::size_t j, const Vector& x) const = 0;

 private:
  void check(std::size_t j, const Vector& x) const;

  mutable std::atomic<double> max_norm_{0.0};
};

/// Data of one second-order cone constraint ||Q x + a|| <= q'x + b.
struct SocConstraintData {
  Matrix Q;
  Vector a;
  Vector q;
  double b = 0.0;

  Index dimension() const { return q.size(); }
  void validate() const;
};

/// h(x) = ||Q x + a|| - q'x - b.
double soc_value(const SocConstraintData& data, const Vector& x);

/// Q'(Qx + a)/||Qx + a|| - q, or -q where Qx + a = 0.
Vector soc_subgradient(const SocConstraintData& data, const Vector& x);

class SocConstraints final : public ConstraintOracle {
 public:
  explicit SocConstraints(std::vector<SocConstraintData> constraints);

  Index dimension() const override { return dimension_; }
  std::size_t count() const override { return constraints_.size(); }
  const std::vector<SocConstraintData>& data() const { return constraints_; }

 protected:
  double do_value(std::size_t j, const Vector& x) const override;
  Vector do_subgradient(std::size_t j, const Vector& x) const override;

 private:
  std::vector<SocConstraintData> constraints_;
  Index dimension_;
};

/// h_j(x) = A.row(j) x - b_j.
class AffineConstraints final : public ConstraintOracle {
 public:
  AffineConstraints(Matrix A, Vector b);

  Index dimension() const override { return A_.cols(); }
  std::size_t count() const override {
    return static_cast<std::size_t>(A_.rows());
  }

 protected:
  double do_value(std::size_t j, const Vector& x) const override;
  Vector do_subgradient(std::size_t j, const Vector& x) const override;

 private:
  Matrix A_;
  Vector b_;
};

/// Bounds lo <= x <= hi written as 2n functional constraints:
/// h_{2i}(x) = x_i - hi_i and h_{2i+1}(x) = lo_i - x_i.
class BoxConstraints final : public ConstraintOracle {
 public:
  BoxConstraints(Vector lo, Vector hi);

  Index dimension() const override { return lo_.size(); }
  std::size_t count() const override {
    return 2 * static_cast<std::size_t>(lo_.size());
  }

 protected:
  double do_value(std::size_t j, const Vector& x) const override;
  Vector do_subgradient(std::size_t j, const Vector& x) const override;

 private:
  Vector lo_;
  Vector hi_;
};

/// Concatenation of several families; indices run through the parts in order.
class CompositeConstraints final : public ConstraintOracle {
 public:
  explicit CompositeConstraints(
      std::vector<std::shared_ptr<const ConstraintOracle>> parts);

  Index dimension() const override { return dimension_; }
  std::size_t count() const override { return offsets_.back(); }

 protected:
  double do_value(std::size_t j, const Vector& x) const override;
  Vector do_subgradient(std::size_t j, const Vector& x) const override;

 private:
  std::pair<const ConstraintOracle*, std::size_t> locate(std::size_t j) const;

  std::vector<std::shared_ptr<const ConstraintOracle>> parts_;
  std::vector<std::size_t> offsets_;
  Index dimension_;
};

inline constexpr double kContainsTolerance = 1e-12;

/// Closed convex set with a cheap exact projection.
class SimpleSet {
 public:
  virtual ~SimpleSet() = default;

  virtual Index dimension() const = 0;
  virtual Vector project(const Vector& p) const = 0;
  virtual bool contains(const Vector& p,
                        double tol = kContainsTolerance) const = 0;
};

Vector project_box(const Vector& lo, const Vector& hi, const Vector& p);

class BoxSet final : public SimpleSet {
 public:
  BoxSet(Vector lo, Vector hi);

  /// [-radius, radius]^n.
  static BoxSet symmetric(Index n, double radius);

  Index dimension() const override { return lo_.size(); }
  Vector project(const Vector& p) const override;
  bool contains(const Vector& p, double tol = kContainsTolerance) const override;

  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }

 private:
  Vector lo_;
  Vector hi_;
};

/// min f(x) over x in Y subject to h_j(x) <= 0 for all j.
struct ProblemInstance {
  std::shared_ptr<const ObjectiveOracle> objective;
  std::shared_ptr<const ConstraintOracle> constraints;
  std::shared_ptr<const SimpleSet> simple_set;
  Index dimension = 0;
  std::optional<double> known_fstar;

  std::size_t constraint_count() const { return constraints->count(); }
};

/// Checks that all oracle dimensions agree and fills in `dimension`.
ProblemInstance make_instance(std::shared_ptr<const ObjectiveOracle> objective,
                              std::shared_ptr<const ConstraintOracle> constraints,
                              std::shared_ptr<const SimpleSet> simple_set);

/// max_j (h_j(x))_+.
double max_violation(const ProblemInstance& instance, const Vector& x);

inline constexpr double kDefaultBoxRadius = 1e3;
inline constexpr int kGeneratorVersion = 1;

/// Raw data of a random QCQP with second-order cone constraints:
///   min 0.5 x'Q_f x + q_f'x  s.t.  ||Q_i x + a_i|| <= q_i'x + b_i,  x in box.
struct QcqpData {
  Index dimension = 0;
  double mu = 0.0;
  double L_f = 0.0;
  Matrix Q_f;
  Vector q_f;
  std::vector<SocConstraintData> constraints;
  Vector box_lo;
  Vector box_hi;
  std::uint64_t seed = 0;
  // Q_f = objective_scaling * A'A + mu I.
  double objective_scaling = 0.0;
  int generator_version = kGeneratorVersion;
  std::optional<double> fstar;
};

/// Draws a QCQP from a seeded stream. Draw order: A (row-major), q_f, then
/// per constraint n_i, b_i, Q_i (row-major), a_i, q_i.
QcqpData generate_qcqp(Index n, Index m, double mu, std::uint64_t seed);

ProblemInstance make_instance(const QcqpData& data);

inline ProblemInstance generate_instance(Index n, Index m, double mu,
                                         std::uint64_t seed) {
  return make_instance(generate_qcqp(n, m, mu, seed));
}

struct PowerIterationResult {
  double eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest eigenvalue of a symmetric positive semidefinite matrix.
PowerIterationResult power_iteration(const Matrix& S, double rel_tol = 1e-8,
                                     int max_iterations = 10000);

}  // namespace sham
