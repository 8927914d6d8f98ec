// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_SOLVER_HPP_
#define EXTRA_NEWTON_SOLVER_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "extra_newton/constraints.hpp"
#include "extra_newton/errors.hpp"
#include "extra_newton/numerics.hpp"
#include "extra_newton/oracles.hpp"
#include "extra_newton/problems.hpp"
#include "extra_newton/schedule.hpp"

namespace extra_newton {

/// One row of a solver trace. Baselines fill the same schema; fields that
/// have no meaning for a method hold the natural neutral value (e.g. a zero
/// residual for methods without a step-size accumulator).
struct IterationRecord {
  std::int64_t t = 0;
  double gamma = 0.0;       // step size used at t
  double gamma_next = 0.0;  // step size after the residual push (t + 1)
  double residual = 0.0;
  Vector x;          // x_t
  Vector xtilde;     // anchor average
  Vector x_lead;     // x_{t+1/2}
  Vector xbar_lead;  // averaged output point
  double f_at_xbar = 0.0;
  int grad_calls = 0;  // this iteration
  int hess_calls = 0;
  std::int64_t grad_calls_total = 0;
  std::int64_t hess_calls_total = 0;
  double wall_ms = 0.0;  // since the start of the run
  double average_identity_error = 0.0;
  bool feasible = true;
};

/// Order of events inside one iteration; used to assert the lag-one
/// contract on the step size.
enum class CallKind { gamma_read, anchor_sample, lead_sample, residual_push };

struct CallEvent {
  std::int64_t t;
  CallKind kind;
  std::uint64_t stream;
};

struct StepConfig {
  std::optional<double> gamma_scale;  // defaults to the set diameter, or 1 if unbounded
  double gamma0 = 1.0;
  TaylorFactor taylor{};
  std::optional<double> inner_tol;  // defaults to min(1e-10, 1e-3 gamma_t)
};

/// Oracle stream ids: xi_t -> 2t, xi_{t+1/2} -> 2t + 1.
inline std::uint64_t anchor_stream(std::int64_t t) { return 2 * std::uint64_t(t); }
inline std::uint64_t lead_stream(std::int64_t t) { return 2 * std::uint64_t(t) + 1; }

/// Extra-Newton solver state. Each step draws one gradient+Hessian sample at
/// the anchor average, solves the Hessian-augmented extrapolation
/// subproblem, draws a fresh gradient at the lead average, takes the
/// projected main step, and only then folds the step residual into the
/// step-size accumulator.
///
/// With a deterministic oracle and Taylor factor 1 this is the implicit
/// scheme: the subproblem's optimality condition is the implicit update
/// with the lead average substituted.
class ExtraNewton {
 public:
  ExtraNewton(std::shared_ptr<const Objective> f, FeasibleSet set, OracleConfig oracle,
              WeightSchedule sched = WeightSchedule(), StepConfig cfg = {},
              std::optional<Vector> x_init = std::nullopt)
      : f_(std::move(f)),
        set_(std::move(set)),
        oracle_(oracle),
        sched_(sched),
        cursor_(sched_.cursor()),
        cfg_(cfg),
        step_(make_step_state(set_, cfg)) {
    if (!f_) throw PreconditionError("objective is null");
    if (f_->dim() != set_.dim()) throw DimensionError("objective/set dimension mismatch");
    oracle_.validate();
    if (x_init) {
      if (x_init->size() != set_.dim()) throw DimensionError("initial point dimension mismatch");
      if (!contains(set_, *x_init)) {
        warnings_.push_back("initial point is infeasible; projected onto the set");
        x_ = project(set_, *x_init);
      } else {
        x_ = *x_init;
      }
    } else {
      x_ = project(set_, Vector::Zero(set_.dim()));
    }
    lead_sum_ = Vector::Zero(set_.dim());
    start_ = std::chrono::steady_clock::now();
  }

  /// Executes iteration t and advances to t + 1.
  const IterationRecord& step() {
    const std::int64_t t = t_;
    const Weights w = cursor_.advance();

    // (i) step size from residuals up to t-1, before any time-t randomness
    const double gamma = step_.gamma();
    log_.push_back({t, CallKind::gamma_read, 0});

    // (ii)-(iii) anchor average and its oracle sample
    const Vector xtilde = (w.b * x_ + lead_sum_) / w.B;
    const OracleSample anchor = sample(*f_, oracle_, xtilde, anchor_stream(t), true);
    log_.push_back({t, CallKind::anchor_sample, anchor_stream(t)});

    // (iv) extrapolation subproblem
    QuadSubproblem sp{w.a * anchor.grad, *anchor.hess, w.a * w.b / w.B, x_, 1.0 / gamma};
    const double tol = cfg_.inner_tol.value_or(std::min(kDefaultTolerance, 1e-3 * gamma));
    Vector x_lead;
    try {
      x_lead = solve_quad_subproblem(set_, sp, tol);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("iteration " + std::to_string(t) + ": " + e.what(),
                             e.residual());
    }

    // (v)-(vi) lead average and a fresh gradient there
    const Vector xbar = (w.b * x_lead + lead_sum_) / w.B;
    const OracleSample lead = sample(*f_, oracle_, xbar, lead_stream(t), false);
    log_.push_back({t, CallKind::lead_sample, lead_stream(t)});

    // (vii) main step
    Vector x_next = project(set_, x_ - (gamma * w.a) * lead.grad);

    // (viii) residual enters the accumulator only now
    const double residual = step_residual(anchor, lead.grad, xbar, xtilde, cfg_.taylor);
    step_.push_residual(w.a, residual);
    log_.push_back({t, CallKind::residual_push, 0});

    IterationRecord rec;
    rec.t = t;
    rec.gamma = gamma;
    rec.gamma_next = step_.gamma();
    rec.residual = residual;
    rec.average_identity_error =
        ((xbar - xtilde) - (w.b / w.B) * (x_lead - x_)).norm();
    rec.feasible = contains(set_, x_lead) && contains(set_, x_next);
    rec.x = x_;
    rec.xtilde = xtilde;
    rec.x_lead = x_lead;
    rec.xbar_lead = xbar;
    rec.f_at_xbar = f_->value(xbar);
    rec.grad_calls = 2;
    rec.hess_calls = 1;
    grad_calls_ += 2;
    hess_calls_ += 1;
    rec.grad_calls_total = grad_calls_;
    rec.hess_calls_total = hess_calls_;
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start_)
                      .count();

    // (ix) shared tail of both averages
    lead_sum_ += w.b * x_lead;
    x_ = std::move(x_next);
    ++t_;
    trace_.push_back(std::move(rec));
    return trace_.back();
  }

  std::int64_t t() const noexcept { return t_; }
  const Vector& x() const noexcept { return x_; }
  const Vector& lead_sum() const noexcept { return lead_sum_; }
  const StepState& step_state() const noexcept { return step_; }
  const WeightSchedule& schedule() const noexcept { return sched_; }
  const FeasibleSet& set() const noexcept { return set_; }
  const Objective& objective() const noexcept { return *f_; }
  const OracleConfig& oracle() const noexcept { return oracle_; }
  const StepConfig& config() const noexcept { return cfg_; }
  const std::vector<IterationRecord>& trace() const noexcept { return trace_; }
  const std::vector<CallEvent>& call_log() const noexcept { return log_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  static StepState make_step_state(const FeasibleSet& set, const StepConfig& cfg) {
    double scale = 1.0;
    if (cfg.gamma_scale) {
      scale = *cfg.gamma_scale;
    } else if (set.bounded()) {
      const double d = diameter(set);
      if (d > 0.0) scale = d;
    }
    return StepState(scale, cfg.gamma0);
  }

  std::shared_ptr<const Objective> f_;
  FeasibleSet set_;
  OracleConfig oracle_;
  WeightSchedule sched_;
  WeightSchedule::Cursor cursor_;
  StepConfig cfg_;
  StepState step_;
  std::int64_t t_ = 1;
  Vector x_;
  Vector lead_sum_;
  std::int64_t grad_calls_ = 0;
  std::int64_t hess_calls_ = 0;
  std::vector<IterationRecord> trace_;
  std::vector<CallEvent> log_;
  std::vector<std::string> warnings_;
  std::chrono::steady_clock::time_point start_;
};

/// Stop once f(xbar) - f_star <= tolerance.
struct GapStop {
  double f_star;
  double tolerance;
};

struct RunResult {
  Vector xbar;
  std::span<const IterationRecord> trace;
  bool stopped_early = false;
};

/// Runs up to T more iterations and returns the last lead average.
inline RunResult run(ExtraNewton& state, std::int64_t T, std::optional<GapStop> stop = {}) {
  if (T < 1) throw PreconditionError("horizon T must be >= 1");
  bool early = false;
  for (std::int64_t k = 0; k < T; ++k) {
    const IterationRecord& rec = state.step();
    if (stop && rec.f_at_xbar - stop->f_star <= stop->tolerance) {
      early = true;
      break;
    }
  }
  return RunResult{state.trace().back().xbar_lead, state.trace(), early};
}

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_SOLVER_HPP_
