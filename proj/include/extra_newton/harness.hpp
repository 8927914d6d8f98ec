// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_HARNESS_HPP_
#define EXTRA_NEWTON_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "extra_newton/baselines.hpp"
#include "extra_newton/constraints.hpp"
#include "extra_newton/data_io.hpp"
#include "extra_newton/diagnostics.hpp"
#include "extra_newton/errors.hpp"
#include "extra_newton/problems.hpp"
#include "extra_newton/solver.hpp"

namespace extra_newton {

inline constexpr const char* kVersion = "1.0.0";

/// Objective, set and reference optimum shared by every trial of a config.
struct ProblemInstance {
  std::shared_ptr<const Objective> objective;
  FeasibleSet set = FeasibleSet::unconstrained(1);
  Index samples = 0;
  std::optional<ReferenceOptimum> reference;
  std::string reference_note;
};

inline std::shared_ptr<const Objective> build_objective(const ProblemSpec& p) {
  if (p.kind == "quadratic") return synthetic_quadratic(p.dim, p.condition, p.seed);
  LibsvmOptions opt;
  opt.zero_to_minus_one = p.zero_to_minus_one;
  opt.min_dim = p.min_dim;
  Dataset ds = parse_libsvm(std::filesystem::path(p.dataset), opt);
  if (p.max_samples > 0) ds = ds.head(p.max_samples);
  if (p.kind == "least_squares") return std::make_shared<const LeastSquares>(std::move(ds));
  if (p.kind == "logistic") return std::make_shared<const LogisticRegression>(std::move(ds), p.l2);
  throw ConfigError("unknown problem kind '" + p.kind + "'");
}

inline FeasibleSet build_set(const SetSpec& s, Index dim) {
  if (s.kind == "ball") return FeasibleSet::ball(dim, s.radius);
  if (s.kind == "box") return FeasibleSet::box(dim, s.lower, s.upper);
  if (s.kind == "simplex") return FeasibleSet::simplex(dim, s.scale);
  if (s.kind == "unconstrained") return FeasibleSet::unconstrained(dim);
  throw ConfigError("unknown set kind '" + s.kind + "'");
}

inline ProblemInstance build_instance(const RunConfig& cfg) {
  ProblemInstance inst;
  try {
    inst.objective = build_objective(cfg.problem);
    inst.set = build_set(cfg.set, inst.objective->dim());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  inst.samples = inst.objective->sample_count();
  try {
    inst.reference = reference_optimum(*inst.objective, inst.set, cfg.reference_tol);
  } catch (const Error& e) {
    inst.reference_note = std::string("reference optimum unavailable: ") + e.what();
  }
  return inst;
}

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> trace;
  WeightSchedule schedule;
  bool diverged = false;
  std::vector<std::string> warnings;
};

inline std::optional<Vector> initial_point(const RunConfig& cfg, Index dim) {
  if (!cfg.x_init) return std::nullopt;
  if (Index(cfg.x_init->size()) != dim) throw ConfigError("x_init has the wrong dimension");
  return Eigen::Map<const Vector>(cfg.x_init->data(), dim);
}

/// Runs trial k with oracle seed = config seed + k.
inline TrialResult run_trial(const RunConfig& cfg, const ProblemInstance& inst, int k) {
  TrialResult out;
  out.trial = k;
  OracleConfig oracle = cfg.oracle;
  oracle.seed = cfg.oracle.seed + std::uint64_t(k);
  out.seed = oracle.seed;
  out.schedule = WeightSchedule(cfg.algorithm.p);
  const auto x0 = initial_point(cfg, inst.objective->dim());

  if (cfg.algorithm.kind == "extra_newton") {
    StepConfig sc;
    sc.gamma_scale = cfg.algorithm.gamma;
    sc.gamma0 = cfg.algorithm.gamma0;
    sc.taylor = TaylorFactor(cfg.algorithm.taylor_factor);
    sc.inner_tol = cfg.algorithm.inner_tol;
    ExtraNewton solver(inst.objective, inst.set, oracle, out.schedule, sc, x0);
    for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
      const IterationRecord& rec = solver.step();
      if (!std::isfinite(rec.f_at_xbar)) {
        out.diverged = true;
        break;
      }
    }
    out.trace = solver.trace();
    out.warnings = solver.warnings();
  } else {
    BaselineConfig bc;
    bc.kind = baseline_kind_from_string(cfg.algorithm.kind);
    bc.step = cfg.algorithm.step;
    bc.gamma_scale = cfg.algorithm.gamma.value_or(1.0);
    bc.gamma0 = cfg.algorithm.gamma0;
    bc.l_hat = cfg.algorithm.l_hat;
    BaselineResult r = run_baseline(bc, *inst.objective, inst.set, oracle, cfg.horizon, x0);
    out.trace = std::move(r.trace);
    out.diverged = r.diverged;
    out.warnings = std::move(r.warnings);
  }
  return out;
}

/// Every diagnostic that applies to one trial.
inline std::vector<CheckReport> run_checks(const RunConfig& cfg, const ProblemInstance& inst,
                                           const TrialResult& tr) {
  std::vector<CheckReport> out;
  if (cfg.algorithm.kind != "extra_newton") {
    out.push_back(CheckReport::skipped("conversion", "skipped (not an Extra-Newton run)"));
    out.push_back(CheckReport::skipped("template_inequality", "skipped (not an Extra-Newton run)"));
    out.push_back(CheckReport::skipped("sqrt_sum_lemma", "skipped (not an Extra-Newton run)"));
    return out;
  }
  if (tr.trace.empty()) return out;
  // the conversion inequality holds per path for any iterate sequence
  if (inst.reference) {
    out.push_back(check_conversion(tr.trace, *inst.objective, tr.schedule, inst.reference->x));
  } else {
    out.push_back(CheckReport::skipped("conversion", "skipped (" + inst.reference_note + ")"));
  }
  if (!inst.set.bounded()) {
    out.push_back(CheckReport::skipped("template_inequality", "skipped (unbounded set)"));
  } else if (cfg.algorithm.taylor_factor != 1.0 && !cfg.oracle.stochastic()) {
    out.push_back(CheckReport::skipped("template_inequality",
                                       "skipped (run used the half Taylor factor)"));
  } else {
    out.push_back(check_template_inequality(tr.trace, *inst.objective, inst.set, tr.schedule,
                                            !cfg.oracle.stochastic()));
  }
  std::vector<double> alphas;
  bool any_positive = false;
  for (const IterationRecord& r : tr.trace) {
    const double a = tr.schedule.a(r.t);
    alphas.push_back(a * a * r.residual * r.residual);
    any_positive = any_positive || alphas.back() > 0.0;
  }
  if (any_positive) {
    CheckReport lemma = check_sqrt_sum_lemma(alphas);
    lemma.note = "applied to the step-size accumulator increments";
    out.push_back(std::move(lemma));
  } else {
    out.push_back(CheckReport::skipped("sqrt_sum_lemma", "skipped (all residuals are zero)"));
  }
  return out;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline RunRecord make_record(const RunConfig& cfg, const ProblemInstance& inst,
                             const TrialResult& tr, std::vector<CheckReport> checks) {
  RunRecord rec;
  rec.config = to_json(cfg);
  const double f_star = inst.reference ? inst.reference->value : 0.0;
  rec.metadata = {{"version", kVersion},
                  {"trial", tr.trial},
                  {"seed", tr.seed},
                  {"timestamp", utc_timestamp()},
                  {"f_star", inst.reference ? Json(f_star) : Json(nullptr)},
                  {"reference_note", inst.reference_note},
                  {"samples", inst.samples},
                  {"dim", inst.objective->dim()},
                  {"preprocessing", "none"},
                  {"diverged", tr.diverged},
                  {"warnings", tr.warnings}};
  for (const IterationRecord& r : tr.trace) {
    SeriesRow row;
    row.t = r.t;
    row.f_gap = r.f_at_xbar - f_star;
    row.gamma = r.gamma;
    row.residual = r.residual;
    row.grad_calls = r.grad_calls_total;
    row.hess_calls = r.hess_calls_total;
    row.wall_ms = cfg.record_wall_time ? r.wall_ms : 0.0;
    rec.series.push_back(row);
  }
  rec.checks = std::move(checks);
  return rec;
}

inline std::filesystem::path output_root(const RunConfig& cfg) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv("EXTRA_NEWTON_OUT"); env && *env) return env;
  return "runs";
}

inline std::filesystem::path trial_dir(const RunConfig& cfg, int k) {
  return output_root(cfg) / cfg.name / ("trial_" + std::to_string(k));
}

/// Runs `count` independent jobs on at most `jobs` threads; rethrows the
/// first failure after all workers finish.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, count));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct TrialSummary {
  std::filesystem::path dir;
  double final_gap = 0.0;
  double final_gamma = 0.0;
  bool diverged = false;
  bool checks_failed = false;
};

/// Runs every trial of a config and writes one record per trial.
inline std::vector<TrialSummary> execute_config(const RunConfig& cfg, int jobs = 1) {
  cfg.validate();
  const ProblemInstance inst = build_instance(cfg);
  std::vector<TrialSummary> out(std::size_t(cfg.trials));
  parallel_for(cfg.trials, jobs, [&](int k) {
    TrialResult tr = run_trial(cfg, inst, k);
    RunRecord rec = make_record(cfg, inst, tr, run_checks(cfg, inst, tr));
    const auto dir = trial_dir(cfg, k);
    write_run_record(rec, dir);
    TrialSummary& s = out[std::size_t(k)];
    s.dir = dir;
    s.diverged = tr.diverged;
    if (!rec.series.empty()) {
      s.final_gap = rec.series.back().f_gap;
      s.final_gamma = rec.series.back().gamma;
    }
    for (const auto& c : rec.checks) s.checks_failed = s.checks_failed || c.failed();
  });
  return out;
}

/// Re-executes the trial behind a stored record, confirms the stored series
/// reproduces, and recomputes its checks (written back to checks.json).
inline std::vector<CheckReport> recheck_record(const std::filesystem::path& dir) {
  const RunRecord stored = read_run_record(dir);
  RunConfig cfg;
  try {
    cfg = run_config_from_json(stored.config);
  } catch (const ConfigError& e) {
    throw IntegrityError("config.json:config", e.what());
  }
  if (!stored.metadata.contains("trial")) throw IntegrityError("config.json:metadata.trial", "missing");
  const int k = stored.metadata.at("trial").get<int>();
  const ProblemInstance inst = build_instance(cfg);
  const TrialResult tr = run_trial(cfg, inst, k);
  const RunRecord fresh = make_record(cfg, inst, tr, {});
  if (fresh.series.size() != stored.series.size()) {
    throw IntegrityError("series.csv", "row count does not match a re-run of the config");
  }
  for (std::size_t i = 0; i < fresh.series.size(); ++i) {
    SeriesRow a = fresh.series[i], b = stored.series[i];
    a.wall_ms = b.wall_ms = 0.0;
    if (!(a == b)) {
      throw IntegrityError("series.csv:" + std::to_string(i + 2),
                           "row does not match a re-run of the config");
    }
  }
  std::vector<CheckReport> checks = run_checks(cfg, inst, tr);
  write_checks(checks, dir);
  return checks;
}

// ---------------------------------------------------------------------------
// Plotting

enum class PlotAxis { iterations, oracle_calls, epochs };

inline PlotAxis plot_axis_from_string(const std::string& s) {
  if (s == "iterations") return PlotAxis::iterations;
  if (s == "oracle_calls") return PlotAxis::oracle_calls;
  if (s == "epochs") return PlotAxis::epochs;
  throw ConfigError("unknown x axis '" + s + "'");
}

struct CurvePoint {
  std::int64_t t;
  std::int64_t grad_calls;
  std::int64_t hess_calls;
  double weighted_calls;
  double epochs;
  double x;
  double mean;
  double min;
  double max;
};

struct Curve {
  std::string label;
  int trials = 0;
  std::vector<CurvePoint> points;
};

/// Records sharing a config echo (trials of one run) form one curve.
inline std::vector<Curve> aggregate_records(const std::vector<std::filesystem::path>& dirs,
                                            PlotAxis axis) {
  if (dirs.empty()) throw ConfigError("plot needs at least one record");
  std::vector<std::string> order;
  std::map<std::string, std::vector<RunRecord>> groups;
  for (const auto& d : dirs) {
    RunRecord r = read_run_record(d);
    const std::string key = r.config.dump();
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(std::move(r));
  }
  std::vector<Curve> curves;
  for (const auto& key : order) {
    const auto& recs = groups.at(key);
    const Json& cfg = recs.front().config;
    const std::size_t len = recs.front().series.size();
    for (const auto& r : recs) {
      if (r.series.size() != len) throw ConfigError("trials of '" + cfg.at("name").get<std::string>() + "' differ in length");
    }
    if (len == 0) throw ConfigError("empty record for '" + cfg.at("name").get<std::string>() + "'");
    const double hw = cfg.at("hessian_weight").get<double>();
    const bool minibatch = cfg.at("oracle").at("mode") == "minibatch";
    const double n = recs.front().metadata.value("samples", 0.0);
    const double batch = cfg.at("oracle").at("batch_size").get<double>();
    Curve c;
    c.label = cfg.at("name").get<std::string>() + " (" + cfg.at("algorithm").at("kind").get<std::string>() + ")";
    c.trials = int(recs.size());
    for (std::size_t i = 0; i < len; ++i) {
      const SeriesRow& s0 = recs.front().series[i];
      CurvePoint p{};
      p.t = s0.t;
      p.grad_calls = s0.grad_calls;
      p.hess_calls = s0.hess_calls;
      p.weighted_calls = double(s0.grad_calls) + hw * double(s0.hess_calls);
      p.epochs = minibatch && n > 0 ? double(s0.grad_calls) * std::min(batch, n) / n
                                    : double(s0.grad_calls);
      p.x = axis == PlotAxis::iterations ? double(p.t)
            : axis == PlotAxis::oracle_calls ? p.weighted_calls
                                             : p.epochs;
      double sum = 0.0;
      p.min = std::numeric_limits<double>::infinity();
      p.max = -std::numeric_limits<double>::infinity();
      for (const auto& r : recs) {
        const double g = r.series[i].f_gap;
        sum += g;
        p.min = std::min(p.min, g);
        p.max = std::max(p.max, g);
      }
      p.mean = sum / double(recs.size());
      c.points.push_back(p);
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

inline std::string curves_to_csv(const std::vector<Curve>& curves) {
  std::string out = "curve,t,grad_calls,hess_calls,weighted_calls,epochs,x,mean_gap,min_gap,max_gap,trials\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out += "\"" + c.label + "\"," + std::to_string(p.t) + "," + std::to_string(p.grad_calls) +
             "," + std::to_string(p.hess_calls) + "," + format_double(p.weighted_calls) + "," +
             format_double(p.epochs) + "," + format_double(p.x) + "," + format_double(p.mean) +
             "," + format_double(p.min) + "," + format_double(p.max) + "," +
             std::to_string(c.trials) + "\n";
    }
  }
  return out;
}

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Log-scale gap curves; trial groups get a min/max band around the mean.
inline std::string render_svg(const std::vector<Curve>& curves, PlotAxis axis) {
  constexpr double kW = 720, kH = 480, kL = 80, kR = 200, kT = 30, kB = 60;
  constexpr double kFloor = 1e-16;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, std::log10(std::max(p.min, kFloor)));
      ymax = std::max(ymax, std::log10(std::max(p.max, kFloor)));
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1.0;
  auto sx = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR); };
  auto sy = [&](double g) {
    const double ly = std::log10(std::max(g, kFloor));
    return kT + (ymax - ly) / (ymax - ymin) * (kH - kT - kB);
  };
  const char* xlabel = axis == PlotAxis::iterations ? "iterations"
                       : axis == PlotAxis::oracle_calls ? "oracle calls (weighted)"
                                                        : "epochs";
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\""
    << kH - kT - kB << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int step = std::max(1, int(std::ceil((ymax - ymin) / 8.0)));
  for (int e = int(ymin); e <= int(ymax); e += step) {
    const double y = kT + (ymax - e) / (ymax - ymin) * (kH - kT - kB);
    s << "<line x1=\"" << kL << "\" x2=\"" << kW - kR << "\" y1=\"" << detail::svg_num(y)
      << "\" y2=\"" << detail::svg_num(y) << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << kL - 8 << "\" y=\"" << detail::svg_num(y + 4)
      << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    s << "<text x=\"" << detail::svg_num(sx(xv)) << "\" y=\"" << kH - kB + 18
      << "\" text-anchor=\"middle\">" << format_double(std::round(xv * 100.0) / 100.0)
      << "</text>\n";
  }
  s << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">"
    << xlabel << "</text>\n";
  s << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (kT + kH - kB) / 2
    << ")\">f(x) - f*</text>\n";
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    const char* color = kColors[ci % 8];
    if (c.trials > 1) {
      s << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (const auto& p : c.points) s << detail::svg_num(sx(p.x)) << "," << detail::svg_num(sy(p.max)) << " ";
      for (auto it = c.points.rbegin(); it != c.points.rend(); ++it) {
        s << detail::svg_num(sx(it->x)) << "," << detail::svg_num(sy(it->min)) << " ";
      }
      s << "\"/>\n";
    }
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : c.points) s << detail::svg_num(sx(p.x)) << "," << detail::svg_num(sy(p.mean)) << " ";
    s << "\"/>\n";
    const double ly = kT + 16.0 * double(ci + 1);
    s << "<line x1=\"" << kW - kR + 10 << "\" x2=\"" << kW - kR + 30 << "\" y1=\"" << ly
      << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << kW - kR + 35 << "\" y=\"" << ly + 4 << "\">"
      << detail::xml_escape(c.label) << (c.trials > 1 ? " x" + std::to_string(c.trials) : "")
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

/// Writes the SVG and a CSV of the plotted aggregates next to it.
inline std::vector<Curve> plot_records(const std::vector<std::filesystem::path>& dirs,
                                       PlotAxis axis, const std::filesystem::path& svg_path) {
  auto curves = aggregate_records(dirs, axis);
  if (svg_path.has_parent_path()) std::filesystem::create_directories(svg_path.parent_path());
  write_text_file(svg_path, render_svg(curves, axis));
  auto csv_path = svg_path;
  csv_path.replace_extension(".csv");
  write_text_file(csv_path, curves_to_csv(curves));
  return curves;
}

// ---------------------------------------------------------------------------
// Sweeps

/// Cartesian product of a grid {"key": [v1, v2, ...], ...} as override lists.
inline std::vector<std::vector<std::string>> expand_grid(const Json& grid, std::size_t cap) {
  if (!grid.is_object() || grid.empty()) throw ConfigError("grid must be a non-empty object");
  std::vector<std::vector<std::string>> combos{{}};
  for (const auto& [key, values] : grid.items()) {
    if (!values.is_array() || values.empty()) {
      throw ConfigError("grid entry '" + key + "' must be a non-empty array");
    }
    std::vector<std::vector<std::string>> next;
    for (const auto& combo : combos) {
      for (const auto& v : values) {
        auto c = combo;
        c.push_back(key + "=" + v.dump());
        next.push_back(std::move(c));
      }
    }
    combos = std::move(next);
    if (combos.size() > cap) {
      throw ConfigError("grid expands to more than " + std::to_string(cap) + " runs");
    }
  }
  return combos;
}

inline std::string sweep_suffix(const std::vector<std::string>& overrides) {
  std::string out;
  for (const auto& o : overrides) {
    for (char ch : o) {
      const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' ||
                        ch == '_' || ch == '=';
      out += keep ? ch : '_';
    }
    out += "__";
  }
  if (out.size() >= 2) out.resize(out.size() - 2);
  return out;
}

struct SweepEntry {
  std::string name;
  std::vector<std::string> overrides;
  double mean_final_gap = 0.0;
  bool diverged = false;
};

inline std::vector<SweepEntry> run_sweep(const std::filesystem::path& config_path,
                                         const Json& grid, int jobs = 1,
                                         std::size_t cap = 256) {
  const Json base = read_json_file(config_path);
  const auto combos = expand_grid(grid, cap);
  std::vector<SweepEntry> out;
  for (const auto& overrides : combos) {
    Json j = base;
    for (const auto& o : overrides) apply_override(j, o);
    RunConfig cfg = run_config_from_json(j, config_path.parent_path());
    cfg.name += "__" + sweep_suffix(overrides);
    SweepEntry e;
    e.name = cfg.name;
    e.overrides = overrides;
    const auto trials = execute_config(cfg, jobs);
    for (const auto& t : trials) {
      e.mean_final_gap += t.final_gap / double(trials.size());
      e.diverged = e.diverged || t.diverged;
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::string sweep_summary_csv(const std::vector<SweepEntry>& entries) {
  std::string out = "name,overrides,mean_final_gap,diverged\n";
  for (const auto& e : entries) {
    std::string ov;
    for (const auto& o : e.overrides) ov += (ov.empty() ? "" : ";") + o;
    std::string quoted;
    for (char c : ov) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    out += e.name + ",\"" + quoted + "\"," + format_double(e.mean_final_gap) + "," +
           (e.diverged ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_HARNESS_HPP_
