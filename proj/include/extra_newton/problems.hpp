// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_PROBLEMS_HPP_
#define EXTRA_NEWTON_PROBLEMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "extra_newton/constraints.hpp"
#include "extra_newton/errors.hpp"
#include "extra_newton/numerics.hpp"

namespace extra_newton {

/// Rows of `features` are samples.
struct Dataset {
  Matrix features;
  Vector labels;

  Index samples() const noexcept { return features.rows(); }
  Index dim() const noexcept { return features.cols(); }

  void validate(bool classification) const {
    if (features.rows() != labels.size()) {
      throw DimensionError("features have " + std::to_string(features.rows()) +
                           " rows but there are " + std::to_string(labels.size()) +
                           " labels");
    }
    if (!features.allFinite() || !labels.allFinite()) {
      throw PreconditionError("dataset contains NaN or Inf");
    }
    if (classification) {
      for (Index i = 0; i < labels.size(); ++i) {
        if (labels(i) != 1.0 && labels(i) != -1.0) {
          throw PreconditionError("classification label " + std::to_string(labels(i)) +
                                  " at row " + std::to_string(i) + " is not +1/-1");
        }
      }
    }
  }

  /// First `n` rows (all rows when n >= samples()).
  Dataset head(Index n) const {
    n = std::min(n, samples());
    return Dataset{features.topRows(n), labels.head(n)};
  }
};

/// Smooth convex objective with exact first and second derivatives.
/// Finite-sum objectives also expose per-batch derivatives for minibatch
/// oracles.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual Index dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual SymmetricOperator hessian(const Vector& x) const = 0;

  /// Hessian-vector product; override when cheaper than forming the Hessian.
  virtual Vector hessian_apply(const Vector& x, const Vector& v) const {
    return hessian(x).apply(v);
  }

  /// Lipschitz modulus of the Hessian, when known.
  virtual std::optional<double> hessian_smoothness() const = 0;

  virtual std::string name() const = 0;

  /// Number of summands for finite-sum objectives, 0 otherwise.
  virtual Index sample_count() const { return 0; }

  /// Gradient of the average loss over the rows in `batch`.
  virtual Vector batch_gradient(const Vector&, std::span<const Index>) const {
    throw UnsupportedModeError(name() + " is not a finite-sum objective");
  }

  virtual SymmetricOperator batch_hessian(const Vector&, std::span<const Index>) const {
    throw UnsupportedModeError(name() + " is not a finite-sum objective");
  }
};

namespace detail {

inline void check_point(const Objective& f, const Vector& x) {
  if (x.size() != f.dim()) throw DimensionError("point dimension mismatch");
}

inline Matrix rows_of(const Matrix& a, std::span<const Index> batch) {
  Matrix out(Index(batch.size()), a.cols());
  for (Index k = 0; k < Index(batch.size()); ++k) {
    const Index i = batch[std::size_t(k)];
    if (i < 0 || i >= a.rows()) throw DimensionError("batch index out of range");
    out.row(k) = a.row(i);
  }
  return out;
}

inline Vector entries_of(const Vector& y, std::span<const Index> batch) {
  Vector out(Index(batch.size()));
  for (Index k = 0; k < Index(batch.size()); ++k) out(k) = y(batch[std::size_t(k)]);
  return out;
}

// log(1 + exp(t)) without overflow
inline double log1pexp(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace detail

/// f(x) = (1/2n) ||A x - y||^2.
class LeastSquares final : public Objective {
 public:
  explicit LeastSquares(Dataset data) : data_(std::move(data)) {
    data_.validate(false);
    if (data_.samples() == 0) throw PreconditionError("empty dataset");
    hessian_ = (data_.features.transpose() * data_.features) / double(data_.samples());
    hessian_ = (0.5 * (hessian_ + hessian_.transpose())).eval();
  }

  Index dim() const override { return data_.dim(); }

  double value(const Vector& x) const override {
    detail::check_point(*this, x);
    return 0.5 * (data_.features * x - data_.labels).squaredNorm() / double(data_.samples());
  }

  Vector gradient(const Vector& x) const override {
    detail::check_point(*this, x);
    return data_.features.transpose() * (data_.features * x - data_.labels) /
           double(data_.samples());
  }

  SymmetricOperator hessian(const Vector& x) const override {
    detail::check_point(*this, x);
    return SymmetricOperator::dense(hessian_);
  }

  Vector hessian_apply(const Vector& x, const Vector& v) const override {
    detail::check_point(*this, x);
    return hessian_ * v;
  }

  std::optional<double> hessian_smoothness() const override { return 0.0; }
  std::string name() const override { return "least_squares"; }
  Index sample_count() const override { return data_.samples(); }

  Vector batch_gradient(const Vector& x, std::span<const Index> batch) const override {
    detail::check_point(*this, x);
    const Matrix a = detail::rows_of(data_.features, batch);
    const Vector y = detail::entries_of(data_.labels, batch);
    return a.transpose() * (a * x - y) / double(batch.size());
  }

  SymmetricOperator batch_hessian(const Vector& x,
                                  std::span<const Index> batch) const override {
    detail::check_point(*this, x);
    const Matrix a = detail::rows_of(data_.features, batch);
    Matrix h = (a.transpose() * a) / double(batch.size());
    return SymmetricOperator::dense(0.5 * (h + h.transpose()));
  }

  const Dataset& data() const noexcept { return data_; }

 private:
  Dataset data_;
  Matrix hessian_;
};

/// f(x) = (1/n) sum log(1 + exp(-y_i a_i^T x)) + (l2/2) ||x||^2.
///
/// Reported Hessian smoothness: |sigma''| <= 1/(6 sqrt 3) gives
/// ||H(x) - H(y)|| <= (1/(6 sqrt 3 n)) sum ||a_i||^3 ||x - y||.
class LogisticRegression final : public Objective {
 public:
  LogisticRegression(Dataset data, double l2 = 0.0) : data_(std::move(data)), l2_(l2) {
    data_.validate(true);
    if (data_.samples() == 0) throw PreconditionError("empty dataset");
    if (!(l2 >= 0.0) || !std::isfinite(l2)) throw PreconditionError("l2 must be >= 0");
    double s = 0.0;
    for (Index i = 0; i < data_.samples(); ++i) {
      s += std::pow(data_.features.row(i).norm(), 3);
    }
    smoothness_ = s / (6.0 * std::sqrt(3.0) * double(data_.samples()));
  }

  Index dim() const override { return data_.dim(); }

  double value(const Vector& x) const override {
    detail::check_point(*this, x);
    const Vector margins = data_.labels.cwiseProduct(data_.features * x);
    double s = 0.0;
    for (Index i = 0; i < margins.size(); ++i) s += detail::log1pexp(-margins(i));
    return s / double(data_.samples()) + 0.5 * l2_ * x.squaredNorm();
  }

  Vector gradient(const Vector& x) const override {
    detail::check_point(*this, x);
    return gradient_rows(data_.features, data_.labels, x);
  }

  SymmetricOperator hessian(const Vector& x) const override {
    detail::check_point(*this, x);
    return hessian_rows(data_.features, x);
  }

  Vector hessian_apply(const Vector& x, const Vector& v) const override {
    detail::check_point(*this, x);
    const Matrix& a = data_.features;
    const Vector w = curvature_weights(a, x);
    return a.transpose() * w.cwiseProduct(a * v) / double(a.rows()) + l2_ * v;
  }

  std::optional<double> hessian_smoothness() const override { return smoothness_; }
  std::string name() const override { return "logistic_regression"; }
  Index sample_count() const override { return data_.samples(); }

  Vector batch_gradient(const Vector& x, std::span<const Index> batch) const override {
    detail::check_point(*this, x);
    return gradient_rows(detail::rows_of(data_.features, batch),
                         detail::entries_of(data_.labels, batch), x);
  }

  SymmetricOperator batch_hessian(const Vector& x,
                                  std::span<const Index> batch) const override {
    detail::check_point(*this, x);
    return hessian_rows(detail::rows_of(data_.features, batch), x);
  }

  const Dataset& data() const noexcept { return data_; }
  double l2() const noexcept { return l2_; }

 private:
  Vector gradient_rows(const Matrix& a, const Vector& y, const Vector& x) const {
    const Vector margins = y.cwiseProduct(a * x);
    Vector coeff(margins.size());
    for (Index i = 0; i < margins.size(); ++i) {
      coeff(i) = -y(i) * detail::sigmoid(-margins(i));
    }
    return a.transpose() * coeff / double(a.rows()) + l2_ * x;
  }

  static Vector curvature_weights(const Matrix& a, const Vector& x) {
    const Vector z = a * x;
    Vector w(z.size());
    for (Index i = 0; i < z.size(); ++i) {
      const double s = detail::sigmoid(z(i));
      w(i) = s * (1.0 - s);
    }
    return w;
  }

  SymmetricOperator hessian_rows(const Matrix& a, const Vector& x) const {
    const Vector w = curvature_weights(a, x);
    const Matrix wa = w.cwiseSqrt().asDiagonal() * a;
    Matrix h = Matrix::Zero(a.cols(), a.cols());
    h.selfadjointView<Eigen::Lower>().rankUpdate(wa.transpose(), 1.0 / double(a.rows()));
    Matrix full = h.selfadjointView<Eigen::Lower>();
    h = std::move(full);
    h.diagonal().array() += l2_;
    return SymmetricOperator::dense(std::move(h));
  }

  Dataset data_;
  double l2_;
  double smoothness_ = 0.0;
};

/// f(x) = 1/2 (x - x*)^T Q (x - x*).
class Quadratic final : public Objective {
 public:
  Quadratic(Matrix q, Vector minimizer) : q_(std::move(q)), minimizer_(std::move(minimizer)) {
    if (q_.rows() != q_.cols() || q_.rows() != minimizer_.size()) {
      throw DimensionError("quadratic: Q and minimizer sizes disagree");
    }
    q_ = (0.5 * (q_ + q_.transpose())).eval();
  }

  Index dim() const override { return minimizer_.size(); }

  double value(const Vector& x) const override {
    detail::check_point(*this, x);
    const Vector dx = x - minimizer_;
    return 0.5 * dx.dot(q_ * dx);
  }

  Vector gradient(const Vector& x) const override {
    detail::check_point(*this, x);
    return q_ * (x - minimizer_);
  }

  SymmetricOperator hessian(const Vector& x) const override {
    detail::check_point(*this, x);
    return SymmetricOperator::dense(q_);
  }

  Vector hessian_apply(const Vector& x, const Vector& v) const override {
    detail::check_point(*this, x);
    return q_ * v;
  }

  std::optional<double> hessian_smoothness() const override { return 0.0; }
  std::string name() const override { return "quadratic"; }

  const Matrix& matrix() const noexcept { return q_; }
  const Vector& minimizer() const noexcept { return minimizer_; }

 private:
  Matrix q_;
  Vector minimizer_;
};

/// Random quadratic with eigenvalues log-spaced on [1, condition] in a random
/// orthonormal basis, and minimizer drawn uniformly on the sphere of radius
/// 1/2. Deterministic in `seed`.
inline std::shared_ptr<const Quadratic> synthetic_quadratic(Index dim, double condition,
                                                            std::uint64_t seed) {
  if (dim <= 0) throw PreconditionError("dimension must be positive");
  if (!(condition >= 1.0) || !std::isfinite(condition)) {
    throw PreconditionError("condition number must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix u = qr.householderQ() * Matrix::Identity(dim, dim);
  Vector eig(dim);
  for (Index i = 0; i < dim; ++i) {
    eig(i) = dim == 1 ? 1.0 : std::pow(condition, double(i) / double(dim - 1));
  }
  Matrix q = u * eig.asDiagonal() * u.transpose();
  Vector xs(dim);
  for (Index i = 0; i < dim; ++i) xs(i) = normal(rng);
  xs *= 0.5 / xs.norm();
  return std::make_shared<const Quadratic>(std::move(q), std::move(xs));
}

/// ||x - P(x - grad f(x))||, the unit-step projected-gradient mapping.
inline double gradient_mapping_norm(const Objective& f, const FeasibleSet& set,
                                    const Vector& x) {
  return (x - project(set, x - f.gradient(x))).norm();
}

struct ReferenceOptimum {
  Vector x;
  double value;
  double mapping_norm;
  int iterations;
};

/// High-accuracy minimizer over the set: restarted accelerated projected
/// gradient with backtracking, followed by projected Newton polishing on the
/// exact Hessian. Stops once the unit-step gradient mapping is <= tol and
/// returns the best iterate seen.
inline ReferenceOptimum reference_optimum(const Objective& f, const FeasibleSet& set,
                                          double tol = 1e-10,
                                          int first_order_iters = 20000,
                                          int newton_iters = 100) {
  if (f.dim() != set.dim()) throw DimensionError("objective/set dimension mismatch");
  Vector x = project(set, Vector::Zero(f.dim()));
  Vector best = x;
  double best_value = f.value(x);
  double mapping = gradient_mapping_norm(f, set, x);
  int iterations = 0;

  auto consider = [&](const Vector& z) {
    const double v = f.value(z);
    if (v <= best_value) {
      best_value = v;
      best = z;
    }
  };

  // accelerated projected gradient
  double lip = std::max(1e-8, power_iteration(f.hessian(x)));
  Vector y = x;
  double momentum = 1.0;
  for (int k = 0; k < first_order_iters && mapping > tol; ++k, ++iterations) {
    const Vector gy = f.gradient(y);
    const double fy = f.value(y);
    Vector x_next;
    for (;;) {
      x_next = project(set, y - gy / lip);
      const Vector step = x_next - y;
      if (f.value(x_next) <= fy + gy.dot(step) + 0.5 * lip * step.squaredNorm() +
                                 1e-15 * std::abs(fy)) {
        break;
      }
      lip *= 2.0;
    }
    if (gy.dot(x_next - x) > 0.0) {
      momentum = 1.0;
      y = x_next;
    } else {
      const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = x_next + ((momentum - 1.0) / next) * (x_next - x);
      momentum = next;
    }
    x = std::move(x_next);
    consider(x);
    mapping = gradient_mapping_norm(f, set, best);
    if (k % 50 == 49) lip *= 0.9;
    // hand over to Newton once the iterates are in a good basin
    if (mapping < 1e-4) break;
  }

  // projected Newton polish: minimize the local quadratic model over the set
  x = best;
  for (int k = 0; k < newton_iters && mapping > tol; ++k, ++iterations) {
    const Vector g = f.gradient(x);
    const SymmetricOperator h = f.hessian(x);
    const double fx = f.value(x);
    double reg = 1e-12 * std::max(1.0, h.is_dense() ? h.matrix().diagonal().maxCoeff() : 1.0);
    // <g, z> + 1/2 <H(z-x), z-x> is the local model up to a constant
    QuadSubproblem sp{g, h, 1.0, x, reg};
    Vector z = solve_quad_subproblem(set, sp, 1e-14);
    Vector dir = z - x;
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
      const Vector trial = x + step * dir;
      if (f.value(trial) <= fx + 1e-4 * step * g.dot(dir) + 1e-16 * std::abs(fx)) {
        x = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    consider(x);
    mapping = gradient_mapping_norm(f, set, best);
  }

  if (mapping > tol) {
    throw ConvergenceError("reference optimum did not reach the requested accuracy",
                           mapping);
  }
  return ReferenceOptimum{best, best_value, mapping, iterations};
}

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_PROBLEMS_HPP_
