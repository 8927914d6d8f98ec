// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_NUMERICS_HPP_
#define EXTRA_NEWTON_NUMERICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "extra_newton/errors.hpp"

namespace extra_newton {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Default absolute tolerance on residuals of inner solves.
inline constexpr double kDefaultTolerance = 1e-10;

/// Eigendecomposition M = V diag(values) V^T, values ascending.
struct Spectrum {
  Vector values;
  Matrix vectors;
};

inline Spectrum eigen_decompose(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigensolver did not converge on a " << m.rows() << "x" << m.cols()
       << " matrix (max |entry| " << m.cwiseAbs().maxCoeff() << ")";
    throw NumericError(os.str());
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

/// A symmetric linear map on R^d, either a dense matrix or a matrix-free
/// product. Dense operators may carry a cached eigendecomposition so that
/// downstream solvers do not factor the same matrix twice.
class SymmetricOperator {
 public:
  using Apply = std::function<Vector(const Vector&)>;

  /// Throws PreconditionError unless m is square and symmetric to 1e-12
  /// relative to its largest entry.
  static SymmetricOperator dense(Matrix m) {
    if (m.rows() != m.cols()) {
      throw DimensionError("symmetric operator needs a square matrix");
    }
    if (!m.allFinite()) throw PreconditionError("matrix has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw PreconditionError("matrix is not symmetric");
    }
    SymmetricOperator op;
    op.dim_ = m.rows();
    op.rep_ = std::move(m);
    return op;
  }

  static SymmetricOperator matrix_free(Index dim, Apply apply) {
    if (dim <= 0) throw DimensionError("operator dimension must be positive");
    SymmetricOperator op;
    op.dim_ = dim;
    op.rep_ = std::move(apply);
    return op;
  }

  static SymmetricOperator identity(Index dim) {
    return dense(Matrix::Identity(dim, dim));
  }

  Index dim() const noexcept { return dim_; }
  bool is_dense() const noexcept { return std::holds_alternative<Matrix>(rep_); }

  const Matrix& matrix() const {
    if (!is_dense()) throw PreconditionError("operator is matrix-free");
    return std::get<Matrix>(rep_);
  }

  Vector apply(const Vector& x) const {
    if (x.size() != dim_) throw DimensionError("operator/vector size mismatch");
    if (is_dense()) return std::get<Matrix>(rep_) * x;
    return std::get<Apply>(rep_)(x);
  }

  /// Cached spectrum, or nullptr.
  const Spectrum* spectrum() const noexcept { return spectrum_.get(); }

  /// Dense operator with a known eigendecomposition.
  static SymmetricOperator with_spectrum(Matrix m, Spectrum s) {
    SymmetricOperator op = dense(std::move(m));
    op.spectrum_ = std::make_shared<const Spectrum>(std::move(s));
    return op;
  }

 private:
  SymmetricOperator() = default;

  Index dim_ = 0;
  std::variant<Matrix, Apply> rep_;
  std::shared_ptr<const Spectrum> spectrum_;
};

/// (M + M^T) / 2.
inline SymmetricOperator symmetrize(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("symmetrize needs a square matrix");
  }
  if (!m.allFinite()) throw PreconditionError("matrix has non-finite entries");
  Matrix s = 0.5 * (m + m.transpose());
  return SymmetricOperator::dense(std::move(s));
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clipped to 0.
/// The result carries its spectrum.
inline SymmetricOperator project_psd(const SymmetricOperator& op) {
  Spectrum s = op.spectrum() ? *op.spectrum() : eigen_decompose(op.matrix());
  if (s.values.size() > 0 && s.values.minCoeff() >= 0.0) {
    return SymmetricOperator::with_spectrum(op.matrix(), std::move(s));
  }
  s.values = s.values.cwiseMax(0.0);
  Matrix m = s.vectors * s.values.asDiagonal() * s.vectors.transpose();
  m = (0.5 * (m + m.transpose())).eval();
  return SymmetricOperator::with_spectrum(std::move(m), std::move(s));
}

/// Largest eigenvalue by power iteration from a fixed start vector.
inline double power_iteration(const SymmetricOperator& op, int max_iter = 200,
                              double rel_tol = 1e-8) {
  const Index d = op.dim();
  Vector v(d);
  for (Index i = 0; i < d; ++i) v(i) = 1.0 + 0.1 * std::sin(1.0 + double(i));
  v.normalize();
  double lambda = 0.0;
  for (int k = 0; k < max_iter; ++k) {
    Vector w = op.apply(v);
    const double next = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (k > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

/// Solves M y = rhs for positive definite M with ||My - rhs|| <= tol ||rhs||.
/// Dense: Cholesky plus a few steps of iterative refinement. Matrix-free:
/// conjugate gradients capped at 10 d iterations.
inline Vector solve_spd(const SymmetricOperator& op, const Vector& rhs,
                        double tol = kDefaultTolerance) {
  if (rhs.size() != op.dim()) throw DimensionError("solve_spd size mismatch");
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return Vector::Zero(rhs.size());

  if (op.is_dense()) {
    const Matrix& m = op.matrix();
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
      throw NumericError("Cholesky factorization failed: matrix is not positive definite");
    }
    Vector y = llt.solve(rhs);
    for (int refine = 0; refine < 3; ++refine) {
      Vector r = rhs - m * y;
      if (r.norm() <= tol * rhs_norm) return y;
      y += llt.solve(r);
    }
    const double res = (m * y - rhs).norm();
    if (res > tol * rhs_norm) {
      throw ConvergenceError("Cholesky solve missed tolerance", res / rhs_norm);
    }
    return y;
  }

  const Index d = op.dim();
  const Index cap = 10 * d;
  Vector y = Vector::Zero(d);
  Vector r = rhs;
  Vector p = r;
  double rr = r.squaredNorm();
  for (Index k = 0; k < cap; ++k) {
    if (std::sqrt(rr) <= tol * rhs_norm) return y;
    Vector mp = op.apply(p);
    const double curvature = p.dot(mp);
    if (!(curvature > 0.0)) {
      throw NumericError("conjugate gradients met non-positive curvature");
    }
    const double alpha = rr / curvature;
    y += alpha * p;
    r -= alpha * mp;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  // recompute the true residual before giving up
  const double res = (op.apply(y) - rhs).norm();
  if (res <= tol * rhs_norm) return y;
  throw ConvergenceError("conjugate gradients exceeded 10*d iterations",
                         res / rhs_norm);
}

/// Root of a continuous monotone phi on [lo, hi] with a sign change, by the
/// Illinois variant of regula falsi. Stops at |phi| <= tol or bracket width
/// <= tol.
template <class F>
double find_root_monotone(F&& phi, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw PreconditionError("find_root_monotone: lo > hi");
  double flo = phi(lo);
  double fhi = phi(hi);
  if (std::abs(flo) <= tol) return lo;
  if (std::abs(fhi) <= tol) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  int side = 0;
  for (int k = 0; k < 1000; ++k) {
    if (hi - lo <= tol) break;
    double mid = (lo * fhi - hi * flo) / (fhi - flo);
    // fall back to bisection when the secant point is not strictly inside
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const double fmid = phi(mid);
    if (std::abs(fmid) <= tol) return mid;
    if ((fmid > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fmid;
      if (side == -1) flo *= 0.5;
      side = -1;
    } else {
      lo = mid;
      flo = fmid;
      if (side == 1) fhi *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

/// Samples the linearity of op: apply(a x + b y) against a apply(x) + b apply(y)
/// on random Gaussian pairs. Returns the worst relative deviation.
inline double linearity_defect(const SymmetricOperator& op, std::uint64_t seed,
                               int samples = 10) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector x(op.dim()), y(op.dim());
    for (Index i = 0; i < op.dim(); ++i) {
      x(i) = normal(rng);
      y(i) = normal(rng);
    }
    const double a = normal(rng);
    const double b = normal(rng);
    Vector lhs = op.apply(a * x + b * y);
    Vector rhs = a * op.apply(x) + b * op.apply(y);
    worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
  }
  return worst;
}

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_NUMERICS_HPP_
