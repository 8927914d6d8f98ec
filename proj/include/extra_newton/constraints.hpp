// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_CONSTRAINTS_HPP_
#define EXTRA_NEWTON_CONSTRAINTS_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "extra_newton/errors.hpp"
#include "extra_newton/numerics.hpp"

namespace extra_newton {

struct Ball {
  Vector center;
  double radius;
};

struct Box {
  Vector lower;
  Vector upper;
};

/// {x >= 0, sum(x) = scale}.
struct Simplex {
  Index dim;
  double scale;
};

struct Unconstrained {
  Index dim;
};

/// Convex feasible set with a cheap Euclidean projection.
class FeasibleSet {
 public:
  using Kind = std::variant<Ball, Box, Simplex, Unconstrained>;

  static FeasibleSet ball(Vector center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw PreconditionError("ball radius must be positive and finite");
    }
    if (center.size() == 0) throw DimensionError("ball center is empty");
    return FeasibleSet(Ball{std::move(center), radius});
  }

  static FeasibleSet ball(Index dim, double radius) {
    return ball(Vector::Zero(dim), radius);
  }

  static FeasibleSet box(Vector lower, Vector upper) {
    if (lower.size() != upper.size() || lower.size() == 0) {
      throw DimensionError("box bounds differ in size");
    }
    if (!lower.allFinite() || !upper.allFinite()) {
      throw PreconditionError("box bounds must be finite");
    }
    if ((lower.array() > upper.array()).any()) {
      throw PreconditionError("box lower bound exceeds upper bound");
    }
    return FeasibleSet(Box{std::move(lower), std::move(upper)});
  }

  static FeasibleSet box(Index dim, double lower, double upper) {
    return box(Vector::Constant(dim, lower), Vector::Constant(dim, upper));
  }

  static FeasibleSet simplex(Index dim, double scale) {
    if (dim <= 0) throw DimensionError("simplex dimension must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw PreconditionError("simplex scale must be positive");
    }
    return FeasibleSet(Simplex{dim, scale});
  }

  static FeasibleSet unconstrained(Index dim) {
    if (dim <= 0) throw DimensionError("dimension must be positive");
    return FeasibleSet(Unconstrained{dim});
  }

  Index dim() const {
    return std::visit(
        [](const auto& s) -> Index {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Ball>) return s.center.size();
          else if constexpr (std::is_same_v<S, Box>) return s.lower.size();
          else return s.dim;
        },
        kind_);
  }

  bool bounded() const { return !std::holds_alternative<Unconstrained>(kind_); }

  std::string name() const {
    switch (kind_.index()) {
      case 0: return "ball";
      case 1: return "box";
      case 2: return "simplex";
      default: return "unconstrained";
    }
  }

  const Kind& kind() const noexcept { return kind_; }

 private:
  explicit FeasibleSet(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

namespace detail {

inline void check_dim(const FeasibleSet& set, const Vector& x) {
  if (x.size() != set.dim()) throw DimensionError("point/set dimension mismatch");
}

// Sort-and-threshold projection onto {x >= 0, sum x = s}.
inline Vector project_simplex(const Vector& v, double s) {
  const Index d = v.size();
  std::vector<double> u(v.data(), v.data() + d);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Index j = 0; j < d; ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - s) / double(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

}  // namespace detail

/// Euclidean projection onto the set.
inline Vector project(const FeasibleSet& set, const Vector& x) {
  detail::check_dim(set, x);
  return std::visit(
      [&](const auto& s) -> Vector {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          Vector y = x - s.center;
          const double n = y.norm();
          if (n <= s.radius) return x;
          return s.center + y * (s.radius / n);
        } else if constexpr (std::is_same_v<S, Box>) {
          return x.cwiseMax(s.lower).cwiseMin(s.upper);
        } else if constexpr (std::is_same_v<S, Simplex>) {
          return detail::project_simplex(x, s.scale);
        } else {
          return x;
        }
      },
      set.kind());
}

/// Membership up to an absolute tolerance.
inline bool contains(const FeasibleSet& set, const Vector& x, double tol = 1e-9) {
  detail::check_dim(set, x);
  if (!x.allFinite()) return false;
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          return (x - s.center).norm() <= s.radius + tol;
        } else if constexpr (std::is_same_v<S, Box>) {
          return ((x - s.lower).array() >= -tol).all() &&
                 ((s.upper - x).array() >= -tol).all();
        } else if constexpr (std::is_same_v<S, Simplex>) {
          return (x.array() >= -tol).all() &&
                 std::abs(x.sum() - s.scale) <= tol * std::max(1.0, s.scale);
        } else {
          return true;
        }
      },
      set.kind());
}

/// Exact Euclidean diameter. Throws for unbounded sets.
inline double diameter(const FeasibleSet& set) {
  return std::visit(
      [](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          return 2.0 * s.radius;
        } else if constexpr (std::is_same_v<S, Box>) {
          return (s.upper - s.lower).norm();
        } else if constexpr (std::is_same_v<S, Simplex>) {
          return s.dim == 1 ? 0.0 : s.scale * std::sqrt(2.0);
        } else {
          throw PreconditionError("diameter of an unbounded set");
        }
      },
      set.kind());
}

/// min over z in the set of <g, z> (negative support function at -g).
inline double min_linear(const FeasibleSet& set, const Vector& g) {
  detail::check_dim(set, g);
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Ball>) {
          return g.dot(s.center) - s.radius * g.norm();
        } else if constexpr (std::is_same_v<S, Box>) {
          return g.cwiseProduct(s.lower).cwiseMin(g.cwiseProduct(s.upper)).sum();
        } else if constexpr (std::is_same_v<S, Simplex>) {
          return s.scale * g.minCoeff();
        } else {
          return g.isZero(0.0) ? 0.0 : -std::numeric_limits<double>::infinity();
        }
      },
      set.kind());
}

/// <c, x> + (curvature_coeff/2) <H (x - x0), x - x0> + (prox_coeff/2) ||x - x0||^2
struct QuadSubproblem {
  Vector linear;
  SymmetricOperator curvature;
  double curvature_coeff;
  Vector prox_center;
  double prox_coeff;

  void validate() const {
    const Index d = linear.size();
    if (curvature.dim() != d || prox_center.size() != d) {
      throw DimensionError("subproblem dimensions disagree");
    }
    if (!(curvature_coeff >= 0.0)) {
      throw PreconditionError("curvature coefficient must be nonnegative");
    }
    if (!(prox_coeff > 0.0) || !std::isfinite(prox_coeff)) {
      throw PreconditionError("prox coefficient must be positive");
    }
  }

  double objective(const Vector& x) const {
    const Vector dx = x - prox_center;
    double v = linear.dot(x) + 0.5 * prox_coeff * dx.squaredNorm();
    if (curvature_coeff != 0.0) {
      v += 0.5 * curvature_coeff * dx.dot(curvature.apply(dx));
    }
    return v;
  }

  Vector gradient(const Vector& x) const {
    const Vector dx = x - prox_center;
    Vector g = linear + prox_coeff * dx;
    if (curvature_coeff != 0.0) g += curvature_coeff * curvature.apply(dx);
    return g;
  }

  /// M = curvature_coeff H + prox_coeff I.
  SymmetricOperator effective_curvature() const {
    if (curvature.is_dense()) {
      Matrix m = curvature_coeff * curvature.matrix();
      m.diagonal().array() += prox_coeff;
      if (const Spectrum* s = curvature.spectrum()) {
        Spectrum ms{(curvature_coeff * s->values.array() + prox_coeff).matrix(),
                    s->vectors};
        return SymmetricOperator::with_spectrum(std::move(m), std::move(ms));
      }
      return SymmetricOperator::dense(std::move(m));
    }
    const SymmetricOperator h = curvature;
    const double kc = curvature_coeff;
    const double pc = prox_coeff;
    return SymmetricOperator::matrix_free(
        h.dim(), [h, kc, pc](const Vector& v) -> Vector {
          return kc * h.apply(v) + pc * v;
        });
  }

  bool curvature_vanishes() const {
    return curvature_coeff == 0.0 ||
           (curvature.is_dense() && curvature.matrix().isZero(0.0));
  }
};

/// Fixed-point residual of the projected-gradient map in distance units:
/// ||x - P(x - grad q(x) / L)||.
inline double subproblem_residual(const FeasibleSet& set, const QuadSubproblem& sp,
                                  const Vector& x, double lipschitz) {
  return (x - project(set, x - sp.gradient(x) / lipschitz)).norm();
}

namespace detail {

inline void require_positive_definite(const SymmetricOperator& m) {
  if (const Spectrum* s = m.spectrum()) {
    if (!(s->values.minCoeff() > 0.0)) {
      throw PreconditionError("subproblem curvature is not positive definite");
    }
    return;
  }
  if (m.is_dense()) {
    Eigen::LLT<Matrix> llt(m.matrix());
    if (llt.info() != Eigen::Success) {
      throw PreconditionError("subproblem curvature is not positive definite");
    }
  }
}

inline double curvature_upper_bound(const SymmetricOperator& m) {
  if (const Spectrum* s = m.spectrum()) return s->values.maxCoeff();
  return power_iteration(m);
}

}  // namespace detail

struct InnerSolveStats {
  int iterations = 0;
  double residual = 0.0;
};

/// Accelerated projected gradient with backtracking on the step and gradient
/// restarts. Works for any set and any curvature representation.
inline Vector solve_quad_projected_gradient(const FeasibleSet& set,
                                            const QuadSubproblem& sp, double tol,
                                            const Vector* warm_start = nullptr,
                                            int max_iter = 500000,
                                            InnerSolveStats* stats = nullptr) {
  sp.validate();
  const SymmetricOperator m = sp.effective_curvature();
  double lip = 1.01 * detail::curvature_upper_bound(m);
  lip = std::max(lip, sp.prox_coeff);

  Vector x = project(set, warm_start ? *warm_start : sp.prox_center);
  Vector y = x;
  double momentum = 1.0;
  double residual = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_iter; ++k) {
    const Vector gy = sp.gradient(y);
    const double qy = sp.objective(y);
    Vector x_next;
    for (;;) {
      x_next = project(set, y - gy / lip);
      const Vector step = x_next - y;
      const double model = qy + gy.dot(step) + 0.5 * lip * step.squaredNorm();
      if (sp.objective(x_next) <= model + 1e-14 * (1.0 + std::abs(qy))) break;
      lip *= 2.0;
    }
    residual = (x_next - y).norm();
    if (stats) {
      stats->iterations = k + 1;
      stats->residual = residual;
    }
    if (residual <= tol) return x_next;
    if (gy.dot(x_next - x) > 0.0) {
      momentum = 1.0;
      y = x_next;
    } else {
      const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = x_next + ((momentum - 1.0) / next) * (x_next - x);
      momentum = next;
    }
    x = std::move(x_next);
  }
  throw ConvergenceError("projected-gradient subproblem solver hit its iteration cap",
                         residual);
}

/// Exact minimizer over a ball for dense curvature: interior Newton point if
/// feasible, otherwise the boundary multiplier nu >= 0 solving the secular
/// equation ||(M + nu I)^{-1} (M z0 - c)|| = r in the eigenbasis of M.
inline Vector solve_quad_ball_exact(const Ball& ball, const QuadSubproblem& sp) {
  sp.validate();
  const SymmetricOperator m = sp.effective_curvature();
  if (!m.is_dense()) throw PreconditionError("exact ball solver needs dense curvature");
  const Spectrum spec = m.spectrum() ? *m.spectrum() : eigen_decompose(m.matrix());
  if (!(spec.values.minCoeff() > 0.0)) {
    throw PreconditionError("subproblem curvature is not positive definite");
  }
  const Vector z0 = sp.prox_center - ball.center;
  // w = V^T (M z0 - c)
  const Vector w = spec.values.cwiseProduct(spec.vectors.transpose() * z0) -
                   spec.vectors.transpose() * sp.linear;
  const double r = ball.radius;
  auto coords = [&](double nu) -> Vector {
    return w.cwiseQuotient((spec.values.array() + nu).matrix());
  };
  Vector q = coords(0.0);
  if (q.norm() > r) {
    auto phi = [&](double nu) { return coords(nu).norm() - r; };
    const double hi = w.norm() / r;
    const double nu = find_root_monotone(phi, 0.0, hi, 1e-15 * std::max(1.0, r));
    q = coords(nu);
  }
  Vector z = spec.vectors * q;
  const double n = z.norm();
  if (n > r) z *= r / n;
  return ball.center + z;
}

/// Projected Newton with an active set for box constraints and dense
/// curvature. Converges in finitely many steps on strictly convex QPs.
inline Vector solve_quad_box_newton(const Box& box, const FeasibleSet& set,
                                    const QuadSubproblem& sp, double tol,
                                    int max_iter = 500) {
  const SymmetricOperator mop = sp.effective_curvature();
  const Matrix& m = mop.matrix();
  const Index d = m.rows();
  const double lip = std::max(m.diagonal().maxCoeff(), sp.prox_coeff);
  Vector x = project(set, sp.prox_center);
  for (int k = 0; k < max_iter; ++k) {
    const Vector g = sp.gradient(x);
    if ((x - project(set, x - g / lip)).norm() <= tol) return x;
    const double eps = std::min(1e-8, (x - project(set, x - g)).norm());
    std::vector<Index> free_idx;
    free_idx.reserve(d);
    for (Index i = 0; i < d; ++i) {
      const bool at_lower = x(i) <= box.lower(i) + eps && g(i) > 0.0;
      const bool at_upper = x(i) >= box.upper(i) - eps && g(i) < 0.0;
      if (!at_lower && !at_upper) free_idx.push_back(i);
    }
    Vector dir = Vector::Zero(d);
    if (!free_idx.empty()) {
      const Index nf = Index(free_idx.size());
      Matrix mff(nf, nf);
      Vector gf(nf);
      for (Index a = 0; a < nf; ++a) {
        gf(a) = g(free_idx[a]);
        for (Index b = 0; b < nf; ++b) mff(a, b) = m(free_idx[a], free_idx[b]);
      }
      Eigen::LLT<Matrix> llt(mff);
      if (llt.info() != Eigen::Success) {
        throw PreconditionError("subproblem curvature is not positive definite");
      }
      const Vector df = llt.solve(-gf);
      for (Index a = 0; a < nf; ++a) dir(free_idx[a]) = df(a);
    }
    // bound variables move along the scaled negative gradient
    for (Index i = 0; i < d; ++i) {
      if (std::find(free_idx.begin(), free_idx.end(), i) == free_idx.end()) {
        dir(i) = -g(i) / m(i, i);
      }
    }
    const double q0 = sp.objective(x);
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      const Vector trial = project(set, x + alpha * dir);
      const double decrease = g.dot(trial - x);
      if (sp.objective(trial) <= q0 + 1e-4 * decrease) {
        moved = (trial - x).norm() > 0.0;
        x = trial;
        break;
      }
    }
    if (!moved) break;
  }
  // stalled or out of iterations: finish with the first-order solver
  return solve_quad_projected_gradient(set, sp, tol, &x);
}

/// Minimizes the subproblem over the set. Dispatch: vanishing curvature ->
/// projection of x0 - c / prox_coeff; unconstrained -> SPD solve; ball with
/// dense curvature -> exact secular-equation solver; box with dense
/// curvature -> projected Newton; everything else -> accelerated projected
/// gradient. Returned points satisfy subproblem_residual <= tol (step 1/L),
/// up to rounding for the exact paths.
inline Vector solve_quad_subproblem(const FeasibleSet& set, const QuadSubproblem& sp,
                                    double tol = kDefaultTolerance) {
  sp.validate();
  if (sp.linear.size() != set.dim()) throw DimensionError("subproblem/set mismatch");
  if (sp.curvature_vanishes()) {
    return project(set, sp.prox_center - sp.linear / sp.prox_coeff);
  }
  if (std::holds_alternative<Unconstrained>(set.kind())) {
    const SymmetricOperator m = sp.effective_curvature();
    if (m.is_dense()) {
      Eigen::LLT<Matrix> llt(m.matrix());
      if (llt.info() != Eigen::Success) {
        throw PreconditionError("subproblem curvature is not positive definite");
      }
    }
    return sp.prox_center + solve_spd(m, -sp.linear, tol);
  }
  if (sp.curvature.is_dense()) {
    if (const auto* ball = std::get_if<Ball>(&set.kind())) {
      return solve_quad_ball_exact(*ball, sp);
    }
    if (const auto* box = std::get_if<Box>(&set.kind())) {
      detail::require_positive_definite(sp.effective_curvature());
      return solve_quad_box_newton(*box, set, sp, tol);
    }
    detail::require_positive_definite(sp.effective_curvature());
  }
  return solve_quad_projected_gradient(set, sp, tol);
}

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_CONSTRAINTS_HPP_
