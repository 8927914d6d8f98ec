// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
//
// Benchmark harness for the Extra-Newton solver and its baselines.
//
//   extra-newton run   --config <path> [--override k=v ...] [--jobs N]
//   extra-newton check <dir> | --config <path> [--override k=v ...]
//   extra-newton plot  <dirs...> --x {iterations,oracle_calls,epochs} --out <file.svg>
//   extra-newton sweep --config <path> --grid <path> [--jobs N]
//
// Exit codes: 0 success, 1 a check failed, 2 bad configuration or usage,
// 3 divergence, 4 corrupt or tampered record, 5 any other failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "extra_newton/harness.hpp"

namespace fs = std::filesystem;
using namespace extra_newton;

namespace {

enum ExitCode { kOk = 0, kCheckFailed = 1, kConfig = 2, kDiverged = 3, kIntegrity = 4, kOther = 5 };

void print_checks(const fs::path& dir, const std::vector<CheckReport>& checks) {
  for (const auto& c : checks) {
    std::printf("%s  %-24s %-8s", dir.string().c_str(), c.name.c_str(), to_string(c.status).c_str());
    if (c.status != CheckStatus::skipped) std::printf(" worst margin %.3e", c.worst_margin);
    if (!c.note.empty()) std::printf("  %s", c.note.c_str());
    std::printf("\n");
  }
}

bool any_failed(const std::vector<CheckReport>& checks) {
  for (const auto& c : checks)
    if (c.failed()) return true;
  return false;
}

int cmd_run(const std::string& config, const std::vector<std::string>& overrides, int jobs) {
  const RunConfig cfg = load_run_config(config, overrides);
  const auto trials = execute_config(cfg, jobs);
  bool diverged = false;
  for (const auto& t : trials) {
    std::printf("%s  final gap %.6e  gamma_T %.6e%s%s\n", t.dir.string().c_str(), t.final_gap,
                t.final_gamma, t.diverged ? "  DIVERGED" : "",
                t.checks_failed ? "  (a check failed; see checks.json)" : "");
    diverged = diverged || t.diverged;
  }
  return diverged ? kDiverged : kOk;
}

int cmd_check(const std::string& dir, const std::string& config,
              const std::vector<std::string>& overrides, int jobs) {
  if (dir.empty() == config.empty()) throw ConfigError("check needs exactly one of <dir> or --config");
  std::vector<fs::path> dirs;
  if (!config.empty()) {
    const RunConfig cfg = load_run_config(config, overrides);
    for (const auto& t : execute_config(cfg, jobs)) dirs.push_back(t.dir);
  } else if (fs::exists(fs::path(dir) / "config.json") || !fs::is_directory(dir)) {
    dirs.push_back(dir);
  } else {
    // a run directory holding trial_k records
    for (const auto& e : fs::directory_iterator(dir))
      if (fs::exists(e.path() / "config.json")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) dirs.push_back(dir);  // let the reader report the missing file
  }
  bool failed = false;
  for (const auto& d : dirs) {
    const auto checks = recheck_record(d);
    print_checks(d, checks);
    failed = failed || any_failed(checks);
  }
  return failed ? kCheckFailed : kOk;
}

std::vector<fs::path> expand_record_dirs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::exists(p / "config.json") || !fs::is_directory(p)) {
      out.push_back(p);
      continue;
    }
    std::vector<fs::path> trials;
    for (const auto& e : fs::directory_iterator(p))
      if (fs::exists(e.path() / "config.json")) trials.push_back(e.path());
    std::sort(trials.begin(), trials.end());
    if (trials.empty()) trials.push_back(p);
    out.insert(out.end(), trials.begin(), trials.end());
  }
  return out;
}

int cmd_plot(const std::vector<std::string>& inputs, const std::string& axis,
             const std::string& out) {
  const auto curves = plot_records(expand_record_dirs(inputs), plot_axis_from_string(axis), out);
  fs::path csv(out);
  csv.replace_extension(".csv");
  std::printf("wrote %s and %s (%zu curves)\n", out.c_str(), csv.string().c_str(), curves.size());
  return kOk;
}

int cmd_sweep(const std::string& config, const std::string& grid_path, int jobs,
              std::size_t max_runs, const std::string& summary) {
  const Json grid = read_json_file(grid_path);
  const auto entries = run_sweep(config, grid, jobs, max_runs);
  fs::path out = summary;
  if (out.empty()) {
    const RunConfig base = load_run_config(config);
    out = output_root(base) / (base.name + "_sweep.csv");
  }
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_text_file(out, sweep_summary_csv(entries));
  bool diverged = false;
  for (const auto& e : entries) {
    std::printf("%-48s mean final gap %.6e%s\n", e.name.c_str(), e.mean_final_gap,
                e.diverged ? "  DIVERGED" : "");
    diverged = diverged || e.diverged;
  }
  std::printf("summary: %s\n", out.string().c_str());
  return diverged ? kDiverged : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extra-Newton benchmark harness"};
  app.require_subcommand(1);

  std::string config, grid, dir, axis = "iterations", out, summary;
  std::vector<std::string> overrides, inputs;
  int jobs = 1;
  std::size_t max_runs = 256;

  auto* run = app.add_subcommand("run", "Run a configured experiment (all trials)");
  run->add_option("--config", config, "Run configuration (JSON)")->required();
  run->add_option("--override", overrides, "Override a config key, e.g. T=100 or oracle.sigma_g=1");
  run->add_option("--jobs", jobs, "Parallel trials")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "Re-run a record and evaluate its diagnostics");
  check->add_option("dir", dir, "Record directory (or a run directory of trials)");
  check->add_option("--config", config, "Run this configuration, then check it");
  check->add_option("--override", overrides, "Override a config key (with --config)");
  check->add_option("--jobs", jobs, "Parallel trials (with --config)")->check(CLI::PositiveNumber);

  auto* plot = app.add_subcommand("plot", "Plot gap curves from records as SVG (+ CSV)");
  plot->add_option("dirs", inputs, "Record or run directories")->required();
  plot->add_option("--x", axis, "x axis")
      ->check(CLI::IsMember({"iterations", "oracle_calls", "epochs"}));
  plot->add_option("--out", out, "Output SVG path")->required();

  auto* sweep = app.add_subcommand("sweep", "Run the cartesian product of a parameter grid");
  sweep->add_option("--config", config, "Base run configuration")->required();
  sweep->add_option("--grid", grid, "Grid file: {\"key\": [values...], ...}")->required();
  sweep->add_option("--jobs", jobs, "Parallel trials per run")->check(CLI::PositiveNumber);
  sweep->add_option("--max-runs", max_runs, "Refuse grids larger than this");
  sweep->add_option("--summary", summary, "Summary CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(config, overrides, jobs);
    if (*check) return cmd_check(dir, config, overrides, jobs);
    if (*plot) return cmd_plot(inputs, axis, out);
    if (*sweep) return cmd_sweep(config, grid, jobs, max_runs, summary);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const IntegrityError& e) {
    std::fprintf(stderr, "integrity error: %s\n", e.what());
    return kIntegrity;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "diverged: %s\n", e.what());
    return kDiverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kOther;
  }
  return kOther;
}
