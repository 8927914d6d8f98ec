// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#include <cmath>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "extra_newton/diagnostics.hpp"

namespace extra_newton {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(Index(v.size()));
  Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

std::shared_ptr<const Quadratic> half_square() {
  Matrix q(1, 1);
  q(0, 0) = 1.0;
  return std::make_shared<const Quadratic>(q, vec({0}));
}

std::shared_ptr<const LogisticRegression> small_logistic(std::uint64_t seed, Index n, Index d) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Dataset data{Matrix(n, d), Vector(n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) data.features(i, j) = normal(rng);
    data.labels(i) = data.features(i, 0) + 0.5 * normal(rng) > 0.0 ? 1.0 : -1.0;
  }
  return std::make_shared<const LogisticRegression>(std::move(data));
}

std::vector<IterationRecord> worked_run() {
  StepConfig cfg;
  cfg.gamma_scale = 1.0;
  ExtraNewton en(half_square(), FeasibleSet::ball(1, 10.0), OracleConfig{}, WeightSchedule(),
                 cfg, vec({4}));
  run(en, 1);
  return en.trace();
}

TEST(Conversion, WorkedRunSlackTwo) {
  const auto trace = worked_run();
  const CheckReport r = check_conversion(trace, *half_square(), WeightSchedule(), vec({0}));
  EXPECT_TRUE(r.passed());
  ASSERT_EQ(r.slacks.size(), 1u);
  EXPECT_EQ(r.slacks[0], 2.0);
}

TEST(Conversion, OptimumFixedPointIsTheBoundary) {
  const auto q = synthetic_quadratic(2, 3.0, 1);
  ExtraNewton en(q, FeasibleSet::ball(2, 2.0), OracleConfig{}, WeightSchedule(), {}, q->minimizer());
  run(en, 5);
  const CheckReport r = check_conversion(en.trace(), *q, WeightSchedule(), q->minimizer());
  EXPECT_TRUE(r.passed());
  for (double s : r.slacks) EXPECT_NEAR(s, 0.0, 1e-15);
}

TEST(Conversion, WeightHypothesisGated) {
  const auto trace = worked_run();
  std::vector<IterationRecord> two = trace;
  two.push_back(trace[0]);
  two[1].t = 2;
  const std::vector<double> a{1.0, 4.0}, b{1.0, 1.0};  // a/b increasing
  EXPECT_THROW(check_conversion(two, *half_square(), a, b, vec({0})), PreconditionError);
  EXPECT_THROW(check_conversion(trace, *half_square(), WeightSchedule(), Vector()),
               PreconditionError);
}

TEST(Conversion, HoldsForArbitrarySequences) {
  // any lead points, any admissible weights, as long as z minimizes f
  const auto f = synthetic_quadratic(3, 20.0, 2);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<IterationRecord> trace(50);
    Vector lead_sum = Vector::Zero(3);
    CompensatedSum bsum;
    const WeightSchedule sched(2.0 + trial % 3);
    for (int t = 1; t <= 50; ++t) {
      auto& r = trace[t - 1];
      r.t = t;
      r.x_lead = Vector(3);
      for (Index i = 0; i < 3; ++i) r.x_lead(i) = normal(rng);
      lead_sum += sched.b(t) * r.x_lead;
      bsum.add(sched.b(t));
      r.xbar_lead = lead_sum / bsum.value();
    }
    EXPECT_TRUE(check_conversion(trace, *f, sched, f->minimizer()).passed());
  }
}

TEST(Template, WorkedRunPasses) {
  const auto trace = worked_run();
  const CheckReport r = check_template_inequality(trace, *half_square(),
                                                  FeasibleSet::ball(1, 10.0), WeightSchedule(),
                                                  true);
  EXPECT_TRUE(r.passed());
  // 1/2 (3 * 400 - 4) - (4 + 20)
  EXPECT_DOUBLE_EQ(r.slacks[0], 574.0);
}

TEST(Template, StochasticSkipped) {
  const auto trace = worked_run();
  const CheckReport r = check_template_inequality(trace, *half_square(),
                                                  FeasibleSet::ball(1, 10.0), WeightSchedule(),
                                                  false);
  EXPECT_EQ(r.status, CheckStatus::skipped);
  EXPECT_NE(r.note.find("expectation-only"), std::string::npos);
}

TEST(Template, UnboundedSetRejected) {
  EXPECT_THROW(check_template_inequality(worked_run(), *half_square(),
                                         FeasibleSet::unconstrained(1), WeightSchedule(), true),
               PreconditionError);
}

TEST(Template, PassesOnDeterministicRuns) {
  const auto f = small_logistic(4, 60, 4);
  for (const auto& set : {FeasibleSet::ball(4, 3.0), FeasibleSet::box(4, -1.0, 1.0)}) {
    for (double p : {2.0, 3.0}) {
      ExtraNewton en(f, set, OracleConfig{}, WeightSchedule(p));
      run(en, 100);
      EXPECT_TRUE(check_template_inequality(en.trace(), *f, set, WeightSchedule(p), true).passed());
      const auto ref = reference_optimum(*f, set);
      EXPECT_TRUE(check_conversion(en.trace(), *f, WeightSchedule(p), ref.x).passed());
    }
  }
}

TEST(TemplateMean, NeedsThirtySeeds) {
  std::vector<std::vector<IterationRecord>> traces(5, worked_run());
  EXPECT_THROW(check_template_inequality_mean(traces, *half_square(), FeasibleSet::ball(1, 10.0),
                                              WeightSchedule(), vec({0})),
               PreconditionError);
}

TEST(SqrtSumLemma, Examples) {
  const std::vector<double> ones{1, 1, 1, 1};
  const CheckReport r = check_sqrt_sum_lemma(ones);
  EXPECT_TRUE(r.passed());
  const double middle = 1 + 1 / std::sqrt(2.0) + 1 / std::sqrt(3.0) + 0.5;
  EXPECT_NEAR(r.slacks[0], (middle - 2.0) / 2.0, 1e-15);
  EXPECT_NEAR(r.slacks[1], (4.0 - middle) / 2.0, 1e-15);

  const std::vector<double> single{7.0};
  const CheckReport s = check_sqrt_sum_lemma(single);
  EXPECT_TRUE(s.passed());
  EXPECT_NEAR(s.slacks[0], 0.0, 1e-15);
}

TEST(SqrtSumLemma, RandomSequences) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(1, 1000);
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution zero(0.2);
  for (int k = 0; k < 2000; ++k) {
    std::vector<double> a(std::size_t(len(rng)));
    for (auto& v : a) v = zero(rng) ? 0.0 : std::pow(expo(rng), 3);
    a.back() += 1e-3;
    ASSERT_TRUE(check_sqrt_sum_lemma(a).passed()) << "sequence " << k;
  }
}

TEST(SqrtSumLemma, Preconditions) {
  const std::vector<double> neg{1.0, -1.0}, zeros{0.0, 0.0};
  EXPECT_THROW(check_sqrt_sum_lemma(neg), PreconditionError);
  EXPECT_THROW(check_sqrt_sum_lemma(zeros), PreconditionError);
}

TEST(RateSlope, ExactPowerLaws) {
  std::vector<double> ts, cube, root, flat;
  for (int t = 1; t <= 4096; t *= 2) {
    ts.push_back(t);
    cube.push_back(3.0 / std::pow(t, 3));
    root.push_back(0.7 / std::sqrt(double(t)));
    flat.push_back(2.5);
  }
  EXPECT_NEAR(estimate_rate_slope(ts, cube, 64, 1024), -3.0, 1e-9);
  EXPECT_NEAR(estimate_rate_slope(ts, root, 1, 4096), -0.5, 1e-9);
  EXPECT_NEAR(estimate_rate_slope(ts, flat, 1, 4096), 0.0, 1e-9);
}

TEST(RateSlope, Preconditions) {
  const std::vector<double> ts{1, 2, 3}, gaps{1, 0, 1};
  EXPECT_THROW(estimate_rate_slope(ts, gaps, 1, 3), PreconditionError);
  EXPECT_THROW(estimate_rate_slope(ts, gaps, 10, 20), PreconditionError);
}

TEST(NoiseAdaptivity, QuadraticPlateauAndEqualDegeneracy) {
  const auto q = synthetic_quadratic(3, 10.0, 6);
  const auto set = FeasibleSet::ball(3, 1.0);
  ExtraNewton det(q, set, OracleConfig{});
  run(det, 64);
  OracleConfig zero;
  zero.mode = OracleMode::additive_noise;
  ExtraNewton same(q, set, zero);
  run(same, 64);
  const CheckReport eq = check_noise_adaptivity(det.trace(), same.trace());
  EXPECT_EQ(eq.status, CheckStatus::skipped);
  EXPECT_NE(eq.note.find("equal"), std::string::npos);

  OracleConfig noisy = zero;
  noisy.sigma_g = 1.0;
  ExtraNewton sto(q, set, noisy);
  run(sto, 64);
  const CheckReport r = check_noise_adaptivity(det.trace(), sto.trace());
  EXPECT_EQ(r.slacks[1], 1.0 - 0.9);  // deterministic ratio is exactly 1
  EXPECT_GT(r.slacks[0], 0.0);
}

TEST(NoiseAdaptivity, HorizonMismatchRejected) {
  const auto a = worked_run();
  std::vector<IterationRecord> b = a;
  b.push_back(a[0]);
  EXPECT_THROW(check_noise_adaptivity(a, b), PreconditionError);
}

TEST(CheckStatus, StringRoundTrip) {
  for (CheckStatus s : {CheckStatus::passed, CheckStatus::failed, CheckStatus::skipped}) {
    EXPECT_EQ(check_status_from_string(to_string(s)), s);
  }
  EXPECT_THROW(check_status_from_string("maybe"), FormatError);
}

}  // namespace
}  // namespace extra_newton
