// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
//
// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.
//
// The logistic problems use the first 500 rows of the a1a file named by
// EXTRA_NEWTON_A1A, else data/a1a, else the bundled data/a1a_like.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "extra_newton/data_io.hpp"
#include "extra_newton/diagnostics.hpp"
#include "extra_newton/solver.hpp"

namespace fs = std::filesystem;
using namespace extra_newton;

namespace {

// pinned tolerances
constexpr double kConversionTol = 1e-8;
constexpr double kTemplateTol = 1e-7;
constexpr double kQuadGapTol = 1e-10;
constexpr double kQuadGammaTol = 1e-12;
constexpr double kDetSlopeMax = -2.0;
constexpr double kStoSlopeLo = -1.0;
constexpr double kStoSlopeHi = -0.25;

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path a1a_path() {
  if (const char* env = std::getenv("EXTRA_NEWTON_A1A"); env && *env) return env;
  const fs::path real = fs::path(EXTRA_NEWTON_DATA_DIR) / "a1a";
  if (fs::exists(real)) return real;
  return fs::path(EXTRA_NEWTON_DATA_DIR) / "a1a_like";
}

LibsvmOptions a1a_options() {
  LibsvmOptions opt;
  opt.min_dim = 123;
  return opt;
}

std::shared_ptr<const LogisticRegression> a1a_subset() {
  static const auto f = std::make_shared<const LogisticRegression>(
      parse_libsvm(a1a_path(), a1a_options()).head(500), 0.0);
  return f;
}

std::vector<double> gaps_of(const std::vector<IterationRecord>& trace, double f_star) {
  std::vector<double> g;
  for (const auto& r : trace) g.push_back(r.f_at_xbar - f_star);
  return g;
}

std::vector<double> horizon_axis(std::size_t n) {
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = double(i + 1);
  return ts;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// shared between criteria 5-7
struct LogisticRuns {
  double f_star = 0.0;
  std::vector<IterationRecord> det;
  std::vector<IterationRecord> sto_seed0;
  std::vector<double> sto_mean_gap;
  double det_seconds = 0.0;
  double sto_seconds = 0.0;
};

LogisticRuns& logistic_runs() {
  static LogisticRuns runs = [] {
    LogisticRuns r;
    const auto f = a1a_subset();
    const auto set = FeasibleSet::ball(f->dim(), 10.0);
    r.f_star = reference_optimum(*f, set).value;
    auto t0 = Clock::now();
    ExtraNewton det(f, set, OracleConfig{});
    run(det, 4096);
    r.det = det.trace();
    r.det_seconds = seconds_since(t0);

    t0 = Clock::now();
    const int seeds = 10;
    r.sto_mean_gap.assign(4096, 0.0);
    for (int k = 0; k < seeds; ++k) {
      OracleConfig oc;
      oc.mode = OracleMode::additive_noise;
      oc.sigma_g = 1.0;
      oc.sigma_h = 0.1;
      oc.seed = std::uint64_t(k);
      ExtraNewton sto(f, set, oc);
      run(sto, 4096);
      for (std::size_t i = 0; i < 4096; ++i) {
        r.sto_mean_gap[i] += (sto.trace()[i].f_at_xbar - r.f_star) / seeds;
      }
      if (k == 0) r.sto_seed0 = sto.trace();
    }
    r.sto_seconds = seconds_since(t0);
    return r;
  }();
  return runs;
}

Outcome criteria_1_and_2(bool template_only, double* seconds) {
  struct Case {
    std::string name;
    std::shared_ptr<const Objective> f;
    FeasibleSet set;
  };
  std::vector<Case> cases;
  for (Index d : {Index(2), Index(20)}) {
    const auto q = synthetic_quadratic(d, 10.0, 100 + std::uint64_t(d));
    cases.push_back({"quadratic d=" + std::to_string(d) + " ball", q, FeasibleSet::ball(d, 1.0)});
    cases.push_back({"quadratic d=" + std::to_string(d) + " box", q, FeasibleSet::box(d, -1.0, 1.0)});
  }
  const auto lg = a1a_subset();
  cases.push_back({"logistic ball", lg, FeasibleSet::ball(lg->dim(), 10.0)});
  cases.push_back({"logistic box", lg, FeasibleSet::box(lg->dim(), -1.0, 1.0)});

  static std::vector<std::pair<double, double>> margins;  // (conversion, template) per run
  static std::vector<std::string> names;
  static double elapsed = 0.0;
  if (margins.empty()) {
    const auto t0 = Clock::now();
    for (const Case& c : cases) {
      const Vector x_star = reference_optimum(*c.f, c.set, 1e-11).x;
      for (double p : {2.0, 3.0}) {
        ExtraNewton en(c.f, c.set, OracleConfig{}, WeightSchedule(p));
        run(en, 512);
        const auto conv = check_conversion(en.trace(), *c.f, WeightSchedule(p), x_star, kConversionTol);
        const auto tpl = check_template_inequality(en.trace(), *c.f, c.set, WeightSchedule(p), true,
                                                   kTemplateTol);
        margins.emplace_back(conv.worst_margin, tpl.worst_margin);
        names.push_back(c.name + " p=" + fmt("%g", p));
      }
    }
    elapsed = seconds_since(t0);
  }
  *seconds = elapsed;
  bool ok = true;
  double worst = 1e300;
  std::string worst_name;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    const double m = template_only ? margins[i].second : margins[i].first;
    const double tol = template_only ? kTemplateTol : kConversionTol;
    ok = ok && m >= -tol;
    if (m < worst) {
      worst = m;
      worst_name = names[i];
    }
  }
  if (!template_only) ok = ok && elapsed < 120.0;
  return {ok, std::to_string(margins.size()) + " runs, worst slack " + fmt("%.3e", worst) + " (" +
                  worst_name + "), " + fmt("%.1f", elapsed) + " s"};
}

Outcome criterion_3() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> len(1, 1000);
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution zero(0.1);
  double worst = 1e300;
  bool ok = true;
  for (int k = 0; k < 10000; ++k) {
    std::vector<double> a(std::size_t(len(rng)));
    for (auto& v : a) v = zero(rng) ? 0.0 : expo(rng) * std::pow(10.0, expo(rng) - 1.0);
    a.front() += 1e-6;
    const auto rep = check_sqrt_sum_lemma(a);
    ok = ok && rep.passed();
    worst = std::min(worst, rep.worst_margin);
  }
  const double s = seconds_since(t0);
  return {ok && s < 10.0, "10000 sequences, worst relative slack " + fmt("%.3e", worst) + ", " +
                              fmt("%.2f", s) + " s"};
}

Outcome criterion_4() {
  const auto t0 = Clock::now();
  const auto q = synthetic_quadratic(20, 100.0, 4);
  ExtraNewton en(q, FeasibleSet::ball(20, 1.0), OracleConfig{});
  run(en, 200);
  double max_res = 0.0, gamma_dev = 0.0, best_gap = 1e300;
  const double gamma = en.trace().front().gamma;
  for (const auto& r : en.trace()) {
    max_res = std::max(max_res, r.residual);
    gamma_dev = std::max(gamma_dev, std::abs(r.gamma - gamma));
    best_gap = std::min(best_gap, r.f_at_xbar);  // f* = 0 at the interior minimizer
  }
  const double s = seconds_since(t0);
  const bool ok = max_res == 0.0 && gamma_dev <= kQuadGammaTol && best_gap <= kQuadGapTol && s < 5.0;
  return {ok, "max residual " + fmt("%.3e", max_res) + ", gamma drift " + fmt("%.3e", gamma_dev) +
                  ", best gap " + fmt("%.3e", best_gap) + ", " + fmt("%.2f", s) + " s"};
}

Outcome criterion_5() {
  const auto& r = logistic_runs();
  const std::vector<IterationRecord> head(r.det.begin(), r.det.begin() + 1024);
  const double slope =
      estimate_rate_slope(horizon_axis(1024), gaps_of(head, r.f_star), 64, 1024);
  // the T = 1024 prefix is a quarter of the 4096 run
  const double s = r.det_seconds / 4.0;
  return {slope <= kDetSlopeMax && s < 180.0,
          "slope " + fmt("%.4f", slope) + " over [64, 1024], gap at 1024 " +
              fmt("%.3e", head.back().f_at_xbar - r.f_star) + ", ~" + fmt("%.1f", s) + " s"};
}

Outcome criterion_6() {
  const auto& r = logistic_runs();
  const double slope = estimate_rate_slope(horizon_axis(4096), r.sto_mean_gap, 256, 4096);
  return {slope >= kStoSlopeLo && slope <= kStoSlopeHi && r.sto_seconds < 600.0,
          "mean-gap slope " + fmt("%.4f", slope) + " over [256, 4096], 10 seeds, " +
              fmt("%.1f", r.sto_seconds) + " s"};
}

Outcome criterion_7() {
  const auto& r = logistic_runs();
  const auto rep = check_noise_adaptivity(r.det, r.sto_seed0);
  return {rep.passed(), rep.note + ", gamma_T det " + fmt("%.4e", r.det.back().gamma) + " vs stoch " +
                            fmt("%.4e", r.sto_seed0.back().gamma)};
}

Outcome criterion_8() {
  Matrix q(1, 1);
  q(0, 0) = 1.0;
  Vector zero(1), four(1);
  zero << 0.0;
  four << 4.0;
  StepConfig sc;
  sc.gamma_scale = 1.0;
  ExtraNewton en(std::make_shared<const Quadratic>(q, zero), FeasibleSet::ball(1, 10.0),
                 OracleConfig{}, WeightSchedule(2.0), sc, four);
  const IterationRecord rec = en.step();
  // brute-force grid over 4x + (1/2)(x-4)^2 + (1/2)(x-4)^2
  double best = 1e300, arg = 0.0;
  for (int i = -100000; i <= 100000; ++i) {
    const double x = i * 1e-4;
    const double v = 4.0 * x + (x - 4) * (x - 4);
    if (v < best) {
      best = v;
      arg = x;
    }
  }
  const bool ok = rec.x_lead(0) == 2.0 && en.x()(0) == 2.0 && rec.residual == 0.0 &&
                  rec.gamma_next == 1.0 && std::abs(arg - 2.0) <= 1e-4;
  return {ok, "x_lead " + fmt("%.17g", rec.x_lead(0)) + ", x_2 " + fmt("%.17g", en.x()(0)) +
                  ", residual " + fmt("%g", rec.residual) + ", gamma_2 " +
                  fmt("%.17g", rec.gamma_next) + ", grid argmin " + fmt("%g", arg)};
}

Outcome criterion_9() {
  const auto t0 = Clock::now();
  const auto f = synthetic_quadratic(10, 10.0, 9);
  const Vector x = Vector::Constant(10, 0.1);
  const Vector grad = f->gradient(x);
  const Matrix hess = f->hessian(x).matrix();
  OracleConfig oc;
  oc.mode = OracleMode::additive_noise;
  oc.sigma_g = 1.0;
  oc.sigma_h = 0.5;
  oc.psd_repair = false;  // repair would bias the Hessian
  oc.seed = 11;
  const int n = 100000;
  Vector gmean = Vector::Zero(10);
  Matrix hmean = Matrix::Zero(10, 10);
  double gsq = 0.0, hsq = 0.0;
  for (int k = 0; k < n; ++k) {
    const OracleSample s = sample(*f, oc, x, std::uint64_t(k));
    const Vector eg = s.grad - grad;
    const Matrix eh = s.hess->matrix() - hess;
    gmean += eg;
    hmean += eh;
    gsq += eg.squaredNorm();
    hsq += eh.squaredNorm();
  }
  const double root_n = std::sqrt(double(n));
  const double gbias = (gmean / n).norm(), hbias = (hmean / n).norm();
  const bool ok = gbias <= 4.0 * oc.sigma_g / root_n && gsq / n <= 1.1 * oc.sigma_g * oc.sigma_g &&
                  hbias <= 4.0 * oc.sigma_h / root_n && hsq / n <= 1.1 * oc.sigma_h * oc.sigma_h;
  const double s = seconds_since(t0);
  return {ok && s < 30.0, "grad bias " + fmt("%.2e", gbias) + " (limit " + fmt("%.2e", 4.0 / root_n) +
                              "), E|g-grad|^2 " + fmt("%.4f", gsq / n) + ", hess bias " +
                              fmt("%.2e", hbias) + ", E|H-hess|^2 " + fmt("%.4f", hsq / n) + ", " +
                              fmt("%.1f", s) + " s"};
}

Outcome criterion_10() {
  const auto t0 = Clock::now();
  const fs::path path = a1a_path();
  const Dataset ds = parse_libsvm(path);
  // independent scan: rows are non-blank lines, the dimension is the largest index
  std::ifstream in(path);
  std::string line;
  Index rows = 0, dim = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    ++rows;
    while (ls >> tok) dim = std::max<Index>(dim, std::stol(tok.substr(0, tok.find(':'))));
  }
  bool ok = ds.samples() == rows && ds.dim() == dim;

  std::mt19937_64 rng(10);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 20 && ok; ++k) {
    Dataset syn{Matrix::Zero(30, 12), Vector(30)};
    for (Index i = 0; i < 30; ++i) {
      syn.labels(i) = normal(rng) > 0 ? 1.0 : -1.0;
      for (Index j = 0; j < 12; ++j)
        if (normal(rng) > 0.5) syn.features(i, j) = normal(rng);
    }
    syn.features(0, 11) = 1.0;
    std::stringstream ss;
    write_libsvm(ss, syn);
    const Dataset back = parse_libsvm(ss);
    ok = back.features == syn.features && back.labels == syn.labels;
  }
  const double s = seconds_since(t0);
  return {ok && s < 5.0, path.filename().string() + ": " + std::to_string(ds.samples()) + " x " +
                             std::to_string(ds.dim()) + " (scanner " + std::to_string(rows) +
                             " x " + std::to_string(dim) + "), 20 round trips, " +
                             fmt("%.2f", s) + " s"};
}

}  // namespace

int main() {
  std::printf("dataset: %s\n", a1a_path().string().c_str());
  std::fflush(stdout);
  double shared = 0.0;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 conversion inequality (deterministic matrix)", [&] { return criteria_1_and_2(false, &shared); }},
      {"2 regret template (deterministic matrix)", [&] { return criteria_1_and_2(true, &shared); }},
      {"3 sqrt-sum lemma", criterion_3},
      {"4 quadratic degeneracy", criterion_4},
      {"5 deterministic rate slope", criterion_5},
      {"6 stochastic rate slope", criterion_6},
      {"7 noise adaptivity", criterion_7},
      {"8 one-dimensional worked step", criterion_8},
      {"9 oracle statistics", criterion_9},
      {"10 parser fidelity", criterion_10},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
