// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_DIAGNOSTICS_HPP_
#define EXTRA_NEWTON_DIAGNOSTICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "extra_newton/constraints.hpp"
#include "extra_newton/errors.hpp"
#include "extra_newton/numerics.hpp"
#include "extra_newton/problems.hpp"
#include "extra_newton/schedule.hpp"
#include "extra_newton/solver.hpp"

namespace extra_newton {

enum class CheckStatus { passed, failed, skipped };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::passed: return "passed";
    case CheckStatus::failed: return "failed";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

inline CheckStatus check_status_from_string(const std::string& s) {
  if (s == "passed") return CheckStatus::passed;
  if (s == "failed") return CheckStatus::failed;
  if (s == "skipped") return CheckStatus::skipped;
  throw FormatError("unknown check status '" + s + "'", 0, 0);
}

/// Result of one executable inequality. A slack is rhs - lhs, so a check
/// passes iff its worst (smallest) slack is >= -tolerance.
struct CheckReport {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  double worst_margin = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  std::vector<double> slacks;
  std::string note;

  bool passed() const { return status == CheckStatus::passed; }
  bool failed() const { return status == CheckStatus::failed; }

  void finish() {
    worst_margin = slacks.empty() ? std::numeric_limits<double>::infinity()
                                  : *std::min_element(slacks.begin(), slacks.end());
    status = worst_margin >= -tolerance ? CheckStatus::passed : CheckStatus::failed;
  }

  static CheckReport skipped(std::string name, std::string note) {
    CheckReport r;
    r.name = std::move(name);
    r.status = CheckStatus::skipped;
    r.note = std::move(note);
    return r;
  }
};

namespace detail {

inline void require_trace(std::span<const IterationRecord> trace) {
  if (trace.empty()) throw PreconditionError("empty trace");
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].t != std::int64_t(i) + 1) throw PreconditionError("trace must start at t = 1");
  }
}

}  // namespace detail

/// Weighted-average conversion: for every T,
///   f(xbar_T) - f(z) <= R_T(z) / (a_T B_T / b_T),
///   R_T(z) = sum_t a_t <grad f(xbar_t), x_lead_t - z>,
/// with exact gradients. Needs a_t, b_t >= 1 non-decreasing with a_t / b_t
/// non-increasing.
inline CheckReport check_conversion(std::span<const IterationRecord> trace, const Objective& f,
                                    std::span<const double> a, std::span<const double> b,
                                    const Vector& z, double tolerance = 1e-8) {
  detail::require_trace(trace);
  if (a.size() < trace.size() || b.size() < trace.size()) {
    throw PreconditionError("weight sequences shorter than the trace");
  }
  if (z.size() != f.dim()) throw PreconditionError("missing or mis-sized comparator x*");
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (a[i] < 1.0 || b[i] < 1.0) throw PreconditionError("weights must be >= 1");
    if (i > 0 && (a[i] < a[i - 1] || b[i] < b[i - 1])) {
      throw PreconditionError("weights must be non-decreasing");
    }
    if (i > 0 && a[i] / b[i] > a[i - 1] / b[i - 1]) {
      throw PreconditionError("a_t / b_t must be non-increasing");
    }
  }
  CheckReport rep;
  rep.name = "conversion";
  rep.tolerance = tolerance;
  const double fz = f.value(z);
  CompensatedSum regret;
  CompensatedSum sum_b;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const IterationRecord& r = trace[i];
    regret.add(a[i] * f.gradient(r.xbar_lead).dot(r.x_lead - z));
    sum_b.add(b[i]);
    const double bound = regret.value() / (a[i] * sum_b.value() / b[i]);
    rep.slacks.push_back(bound - (f.value(r.xbar_lead) - fz));
  }
  rep.finish();
  return rep;
}

inline CheckReport check_conversion(std::span<const IterationRecord> trace, const Objective& f,
                                    const WeightSchedule& sched, const Vector& z,
                                    double tolerance = 1e-8) {
  detail::require_trace(trace);
  std::vector<double> a, b;
  for (std::size_t i = 1; i <= trace.size(); ++i) {
    a.push_back(sched.a(std::int64_t(i)));
    b.push_back(sched.b(std::int64_t(i)));
  }
  return check_conversion(trace, f, a, b, z, tolerance);
}

/// Deterministic regret template: for every T,
///   sup_z R_T(z) <= 1/2 [3 D^2 / gamma_{T+1}
///                        + sum_t gamma_{t+1} a_t^2 ||grad f(xbar_t) - F(xbar_t; xtilde_t)||^2
///                        - sum_t ||x_lead_t - x_t||^2 / gamma_{t+1}].
/// The sup over the set is taken through its support function, which is at
/// least R_T(x*). F uses the full Hessian term, matching the subproblem's
/// optimality condition, and is recomputed from exact derivatives.
inline CheckReport check_template_inequality(std::span<const IterationRecord> trace,
                                             const Objective& f, const FeasibleSet& set,
                                             const WeightSchedule& sched, bool deterministic,
                                             double tolerance = 1e-7) {
  if (!set.bounded()) throw PreconditionError("template inequality needs a bounded set");
  if (!deterministic) {
    return CheckReport::skipped("template_inequality", "skipped (expectation-only bound)");
  }
  detail::require_trace(trace);
  CheckReport rep;
  rep.name = "template_inequality";
  rep.tolerance = tolerance;
  const double d = diameter(set);
  CompensatedSum played;  // sum a_t <g_t, x_lead_t>
  Vector weighted = Vector::Zero(f.dim());
  CompensatedSum positive;
  CompensatedSum negative;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const IterationRecord& r = trace[i];
    const double a = sched.a(r.t);
    const Vector g = f.gradient(r.xbar_lead);
    played.add(a * g.dot(r.x_lead));
    weighted += a * g;
    const Vector model =
        f.gradient(r.xtilde) + f.hessian_apply(r.xtilde, r.xbar_lead - r.xtilde);
    const double res = (g - model).norm();
    positive.add(r.gamma_next * a * a * res * res);
    negative.add((r.x_lead - r.x).squaredNorm() / r.gamma_next);
    const double regret = played.value() - min_linear(set, weighted);
    const double rhs = 0.5 * (3.0 * d * d / r.gamma_next + positive.value() - negative.value());
    rep.slacks.push_back(rhs - regret);
  }
  rep.finish();
  return rep;
}

/// Mean-over-seeds version of the regret template for stochastic runs:
/// the bound holds in expectation at x*, so the per-seed slacks at the final
/// T are averaged and the check passes when the mean is above
/// -(tolerance + 3 standard errors).
inline CheckReport check_template_inequality_mean(
    std::span<const std::vector<IterationRecord>> traces, const Objective& f,
    const FeasibleSet& set, const WeightSchedule& sched, const Vector& x_star,
    double tolerance = 1e-7) {
  if (!set.bounded()) throw PreconditionError("template inequality needs a bounded set");
  if (traces.size() < 30) throw PreconditionError("mean template check needs >= 30 seeds");
  CheckReport rep;
  rep.name = "template_inequality_mean";
  const double d = diameter(set);
  for (const auto& trace : traces) {
    detail::require_trace(trace);
    CompensatedSum regret, positive, negative;
    for (const IterationRecord& r : trace) {
      const double a = sched.a(r.t);
      regret.add(a * f.gradient(r.xbar_lead).dot(r.x_lead - x_star));
      positive.add(r.gamma_next * a * a * r.residual * r.residual);
      negative.add((r.x_lead - r.x).squaredNorm() / r.gamma_next);
    }
    const double gamma_last = trace.back().gamma_next;
    rep.slacks.push_back(0.5 * (3.0 * d * d / gamma_last + positive.value() - negative.value()) -
                         regret.value());
  }
  const double n = double(rep.slacks.size());
  const double mean = std::accumulate(rep.slacks.begin(), rep.slacks.end(), 0.0) / n;
  double var = 0.0;
  for (double s : rep.slacks) var += (s - mean) * (s - mean);
  var /= (n - 1.0);
  const double width = 3.0 * std::sqrt(var / n);
  rep.tolerance = tolerance + width;
  rep.worst_margin = mean;
  rep.status = mean >= -rep.tolerance ? CheckStatus::passed : CheckStatus::failed;
  rep.note = "mean slack over " + std::to_string(traces.size()) + " seeds";
  return rep;
}

/// sqrt(sum a) <= sum_t a_t / sqrt(sum_{i<=t} a_i) <= 2 sqrt(sum a); terms
/// with an empty prefix sum contribute 0. Slacks are relative to sqrt(sum a).
inline CheckReport check_sqrt_sum_lemma(std::span<const double> alphas,
                                        double tolerance = 1e-12) {
  if (alphas.empty()) throw PreconditionError("empty sequence");
  CompensatedSum prefix;
  CompensatedSum middle;
  for (double v : alphas) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw PreconditionError("alphas must be nonnegative");
    prefix.add(v);
    if (prefix.value() > 0.0) middle.add(v / std::sqrt(prefix.value()));
  }
  const double total = std::sqrt(prefix.value());
  if (!(total > 0.0)) throw PreconditionError("at least one alpha must be positive");
  CheckReport rep;
  rep.name = "sqrt_sum_lemma";
  rep.tolerance = tolerance;
  rep.slacks = {(middle.value() - total) / total, (2.0 * total - middle.value()) / total};
  rep.finish();
  return rep;
}

/// Least-squares slope of log(gap) against log(T) over T in [lo, hi].
inline double estimate_rate_slope(std::span<const double> ts, std::span<const double> gaps,
                                  double lo, double hi) {
  if (ts.size() != gaps.size()) throw DimensionError("T and gap series differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < lo || ts[i] > hi) continue;
    if (!(gaps[i] > 0.0)) {
      throw PreconditionError("non-positive gap at T = " + std::to_string(ts[i]));
    }
    lx.push_back(std::log(ts[i]));
    ly.push_back(std::log(gaps[i]));
  }
  if (lx.size() < 2) throw PreconditionError("fewer than two points in the slope window");
  const double n = double(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(sxx > 0.0)) throw PreconditionError("slope window has a single distinct T");
  return sxy / sxx;
}

struct AdaptivityThresholds {
  double plateau = 0.9;  // deterministic gamma_T / gamma_{T/2} at least this
  double decay = 0.8;    // stochastic gamma_T / gamma_{T/2} at most this
};

/// Deterministic step size settles while the stochastic one keeps shrinking.
/// Slacks: gamma_det - gamma_sto, det ratio - plateau, decay - sto ratio.
inline CheckReport check_noise_adaptivity(std::span<const IterationRecord> det,
                                          std::span<const IterationRecord> sto,
                                          AdaptivityThresholds th = {}) {
  if (det.size() != sto.size()) throw PreconditionError("traces differ in horizon");
  if (det.size() < 2) throw PreconditionError("need a horizon of at least 2");
  const std::size_t T = det.size();
  const std::size_t half = T / 2;
  bool identical = true;
  for (std::size_t i = 0; i < T && identical; ++i) identical = det[i].gamma == sto[i].gamma;
  if (identical) {
    CheckReport r = CheckReport::skipped("noise_adaptivity", "equal: identical step-size series");
    r.worst_margin = 0.0;
    return r;
  }
  const double det_ratio = det[T - 1].gamma / det[half - 1].gamma;
  const double sto_ratio = sto[T - 1].gamma / sto[half - 1].gamma;
  CheckReport rep;
  rep.name = "noise_adaptivity";
  rep.tolerance = 0.0;
  rep.slacks = {det[T - 1].gamma - sto[T - 1].gamma, det_ratio - th.plateau,
                th.decay - sto_ratio};
  rep.note = "det ratio " + std::to_string(det_ratio) + ", stoch ratio " +
             std::to_string(sto_ratio);
  rep.finish();
  return rep;
}

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_DIAGNOSTICS_HPP_
