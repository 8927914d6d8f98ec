// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_BASELINES_HPP_
#define EXTRA_NEWTON_BASELINES_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "extra_newton/constraints.hpp"
#include "extra_newton/errors.hpp"
#include "extra_newton/numerics.hpp"
#include "extra_newton/oracles.hpp"
#include "extra_newton/problems.hpp"
#include "extra_newton/solver.hpp"

namespace extra_newton {

enum class BaselineKind { proj_grad, nesterov_agd, adaptive_extragrad, regularized_newton };

inline std::string to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::proj_grad: return "proj_grad";
    case BaselineKind::nesterov_agd: return "nesterov_agd";
    case BaselineKind::adaptive_extragrad: return "adaptive_extragrad";
    case BaselineKind::regularized_newton: return "regularized_newton";
  }
  return "?";
}

inline BaselineKind baseline_kind_from_string(const std::string& s) {
  if (s == "proj_grad" || s == "gd") return BaselineKind::proj_grad;
  if (s == "nesterov_agd" || s == "agd") return BaselineKind::nesterov_agd;
  if (s == "adaptive_extragrad" || s == "extragrad") return BaselineKind::adaptive_extragrad;
  if (s == "regularized_newton" || s == "newton") return BaselineKind::regularized_newton;
  throw ConfigError("unknown baseline '" + s + "'");
}

struct BaselineConfig {
  BaselineKind kind = BaselineKind::proj_grad;
  double step = 0.1;         // eta for ProjGrad and NesterovAGD
  double gamma_scale = 1.0;  // extragradient accumulator numerator
  double gamma0 = 1.0;
  double l_hat = 1.0;        // Hessian-smoothness estimate for the Newton regularizer
  double divergence_factor = 1e8;

  void validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(step) || !positive(gamma_scale) || !positive(gamma0) || !positive(l_hat) ||
        !positive(divergence_factor)) {
      throw PreconditionError("baseline parameters must be positive and finite");
    }
  }
};

struct BaselineResult {
  std::vector<IterationRecord> trace;
  bool diverged = false;
  std::vector<std::string> warnings;
};

namespace detail {

class BaselineRecorder {
 public:
  BaselineRecorder(const Objective& f, const FeasibleSet& set, const Vector& x1, double factor)
      : f_(f), set_(set), start_(std::chrono::steady_clock::now()) {
    const double f1 = f.value(x1);
    // a zero or tiny starting value would otherwise flag any increase
    limit_ = factor * std::max(std::abs(f1), 1.0);
  }

  /// Appends a record; returns false once the objective has blown up.
  bool push(IterationRecord rec, int grads, int hessians) {
    grads_ += grads;
    hessians_ += hessians;
    rec.grad_calls = grads;
    rec.hess_calls = hessians;
    rec.grad_calls_total = grads_;
    rec.hess_calls_total = hessians_;
    rec.f_at_xbar = f_.value(rec.xbar_lead);
    rec.feasible = contains(set_, rec.x_lead) && contains(set_, rec.xbar_lead);
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    const bool ok = std::isfinite(rec.f_at_xbar) && rec.f_at_xbar <= limit_;
    trace.push_back(std::move(rec));
    return ok;
  }

  std::vector<IterationRecord> trace;

 private:
  const Objective& f_;
  const FeasibleSet& set_;
  std::chrono::steady_clock::time_point start_;
  double limit_;
  std::int64_t grads_ = 0;
  std::int64_t hessians_ = 0;
};

}  // namespace detail

/// Runs one comparison method for T iterations. Records follow the solver
/// schema: x is the iterate at t, xtilde the oracle query point, x_lead the
/// next iterate and xbar_lead the reported output point.
inline BaselineResult run_baseline(const BaselineConfig& cfg, const Objective& f,
                                   const FeasibleSet& set, const OracleConfig& oracle,
                                   std::int64_t T, std::optional<Vector> x_init = std::nullopt) {
  cfg.validate();
  oracle.validate();
  if (T < 1) throw PreconditionError("horizon T must be >= 1");
  if (f.dim() != set.dim()) throw DimensionError("objective/set dimension mismatch");
  if (cfg.kind == BaselineKind::regularized_newton && oracle.mode == OracleMode::additive_noise &&
      oracle.sigma_h > 0.0 && !oracle.psd_repair) {
    throw PreconditionError("regularized Newton needs PSD-repaired Hessian samples");
  }

  BaselineResult out;
  Vector x;
  if (x_init) {
    if (x_init->size() != set.dim()) throw DimensionError("initial point dimension mismatch");
    if (!contains(set, *x_init)) out.warnings.push_back("initial point is infeasible; projected");
    x = project(set, *x_init);
  } else {
    x = project(set, Vector::Zero(set.dim()));
  }

  detail::BaselineRecorder rec(f, set, x, cfg.divergence_factor);
  bool ok = true;

  switch (cfg.kind) {
    case BaselineKind::proj_grad: {
      for (std::int64_t t = 1; t <= T && ok; ++t) {
        const Vector g = sample(f, oracle, x, anchor_stream(t), false).grad;
        Vector next = project(set, x - cfg.step * g);
        IterationRecord r;
        r.t = t;
        r.gamma = r.gamma_next = cfg.step;
        r.x = x;
        r.xtilde = x;
        r.x_lead = next;
        r.xbar_lead = next;
        x = std::move(next);
        ok = rec.push(std::move(r), 1, 0);
      }
      break;
    }
    case BaselineKind::nesterov_agd: {
      // FISTA momentum on the projected gradient step
      Vector y = x;
      double theta = 1.0;
      for (std::int64_t t = 1; t <= T && ok; ++t) {
        const Vector g = sample(f, oracle, y, anchor_stream(t), false).grad;
        Vector next = project(set, y - cfg.step * g);
        const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        IterationRecord r;
        r.t = t;
        r.gamma = r.gamma_next = cfg.step;
        r.x = x;
        r.xtilde = y;
        r.x_lead = next;
        r.xbar_lead = next;
        y = next + ((theta - 1.0) / theta_next) * (next - x);
        x = std::move(next);
        theta = theta_next;
        ok = rec.push(std::move(r), 1, 0);
      }
      break;
    }
    case BaselineKind::adaptive_extragrad: {
      StepState step(cfg.gamma_scale, cfg.gamma0);
      Vector lead_sum = Vector::Zero(x.size());
      for (std::int64_t t = 1; t <= T && ok; ++t) {
        const double gamma = step.gamma();
        const Vector g_anchor = sample(f, oracle, x, anchor_stream(t), false).grad;
        Vector lead = project(set, x - gamma * g_anchor);
        const Vector g_lead = sample(f, oracle, lead, lead_stream(t), false).grad;
        Vector next = project(set, x - gamma * g_lead);
        const double residual = (g_lead - g_anchor).norm();
        step.push_residual(1.0, residual);
        lead_sum += lead;
        IterationRecord r;
        r.t = t;
        r.gamma = gamma;
        r.gamma_next = step.gamma();
        r.residual = residual;
        r.x = x;
        r.xtilde = x;
        r.x_lead = lead;
        r.xbar_lead = lead_sum / double(t);  // uniform ergodic average
        x = std::move(next);
        ok = rec.push(std::move(r), 2, 0);
      }
      break;
    }
    case BaselineKind::regularized_newton: {
      for (std::int64_t t = 1; t <= T && ok; ++t) {
        const OracleSample s = sample(f, oracle, x, anchor_stream(t), true);
        const double lambda = std::sqrt(cfg.l_hat * s.grad.norm());
        Vector next = x;
        if (lambda > 0.0) {
          Matrix m = s.hess->matrix();
          m.diagonal().array() += lambda;
          next = project(set, x - solve_spd(SymmetricOperator::dense(std::move(m)), s.grad));
        }
        IterationRecord r;
        r.t = t;
        r.gamma = r.gamma_next = lambda;
        r.x = x;
        r.xtilde = x;
        r.x_lead = next;
        r.xbar_lead = next;
        x = std::move(next);
        ok = rec.push(std::move(r), 1, 1);
      }
      break;
    }
  }
  out.trace = std::move(rec.trace);
  out.diverged = !ok;
  return out;
}

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_BASELINES_HPP_
