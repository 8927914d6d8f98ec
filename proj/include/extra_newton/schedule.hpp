// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_SCHEDULE_HPP_
#define EXTRA_NEWTON_SCHEDULE_HPP_

#include <cmath>
#include <cstdint>

#include "extra_newton/errors.hpp"

namespace extra_newton {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      compensation_ += (sum_ - t) + v;
    } else {
      compensation_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct Weights {
  double a;  // gradient weight
  double b;  // averaging weight
  double A;  // sum of a up to t
  double B;  // sum of b up to t
};

/// Gradient weights a_t = t^2 and averaging weights b_t = t^p, p >= 2.
class WeightSchedule {
 public:
  explicit WeightSchedule(double p = 2.0) : p_(p) {
    if (!(p >= 2.0) || !std::isfinite(p)) {
      throw PreconditionError("averaging exponent p must be >= 2");
    }
  }

  double p() const noexcept { return p_; }

  double a(std::int64_t t) const {
    check(t);
    return a_of(t);
  }

  double b(std::int64_t t) const {
    check(t);
    return b_of(t, p_);
  }

  /// Walks t = 1, 2, ... keeping compensated prefix sums.
  class Cursor {
   public:
    explicit Cursor(double p) : p_(p) {}

    Weights advance() {
      ++t_;
      const double a = a_of(t_);
      const double b = b_of(t_, p_);
      sum_a_.add(a);
      sum_b_.add(b);
      return Weights{a, b, sum_a_.value(), sum_b_.value()};
    }

    std::int64_t t() const noexcept { return t_; }

   private:
    double p_;
    std::int64_t t_ = 0;
    CompensatedSum sum_a_;
    CompensatedSum sum_b_;
  };

  Cursor cursor() const { return Cursor(p_); }

 private:
  static double a_of(std::int64_t t) { return double(t) * double(t); }

  static double b_of(std::int64_t t, double p) {
    return p == 2.0 ? double(t) * double(t) : std::pow(double(t), p);
  }

  static void check(std::int64_t t) {
    if (t < 1) throw PreconditionError("weight index t must be >= 1");
  }

  double p_;
};

/// (a_t, b_t, A_t, B_t).
inline Weights weights_at(const WeightSchedule& sched, std::int64_t t) {
  if (t < 1) throw PreconditionError("weight index t must be >= 1");
  auto c = sched.cursor();
  Weights w{};
  for (std::int64_t s = 1; s <= t; ++s) w = c.advance();
  return w;
}

/// Lagged accumulator behind gamma_t = gamma / sqrt(gamma0 + sum_{s<t} a_s^2 r_s^2).
/// push_residual must only be called once step t is complete, so the step
/// size read at time t never sees time-t randomness.
class StepState {
 public:
  StepState(double gamma_scale = 1.0, double gamma0 = 1.0)
      : gamma_scale_(gamma_scale), gamma0_(gamma0) {
    if (!(gamma_scale > 0.0) || !std::isfinite(gamma_scale)) {
      throw PreconditionError("gamma scale must be positive");
    }
    if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) {
      throw PreconditionError("gamma0 must be positive");
    }
  }

  double gamma() const { return gamma_scale_ / std::sqrt(gamma0_ + accumulator_.value()); }

  void push_residual(double a, double residual) {
    if (!(residual >= 0.0)) throw PreconditionError("residual must be nonnegative");
    accumulator_.add(a * a * residual * residual);
  }

  double gamma_scale() const noexcept { return gamma_scale_; }
  double gamma0() const noexcept { return gamma0_; }
  double accumulator() const noexcept { return accumulator_.value(); }

 private:
  double gamma_scale_;
  double gamma0_;
  CompensatedSum accumulator_;
};

inline double current_gamma(const StepState& st) { return st.gamma(); }

[[nodiscard]] inline StepState push_residual(StepState st, double a, double residual) {
  st.push_residual(a, residual);
  return st;
}

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_SCHEDULE_HPP_
