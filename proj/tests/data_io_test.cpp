// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "extra_newton/data_io.hpp"

namespace fs = std::filesystem;

namespace extra_newton {
namespace {

Dataset parse(const std::string& text, const LibsvmOptions& opt = {}) {
  std::istringstream in(text);
  return parse_libsvm(in, opt);
}

FormatError parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const FormatError& e) {
    return e;
  }
  ADD_FAILURE() << "no FormatError for: " << text;
  return FormatError("none", 0, 0);
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("extra_newton_data_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

TEST(Libsvm, Examples) {
  const Dataset a = parse("+1 3:0.5\n");
  EXPECT_EQ(a.labels(0), 1.0);
  ASSERT_EQ(a.dim(), 3);
  EXPECT_EQ(a.features(0, 0), 0.0);
  EXPECT_EQ(a.features(0, 1), 0.0);
  EXPECT_EQ(a.features(0, 2), 0.5);

  const Dataset b = parse("-1 1:2 2:-1\n");
  EXPECT_EQ(b.labels(0), -1.0);
  EXPECT_EQ(b.features(0, 0), 2.0);
  EXPECT_EQ(b.features(0, 1), -1.0);
}

TEST(Libsvm, NonIncreasingIndexRejected) {
  const FormatError e = parse_error("1 2:1 2:3\n");
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(e.column(), 7u);
  EXPECT_EQ(parse_error("1 3:1 2:3\n").line(), 1u);
}

TEST(Libsvm, ErrorsCarryLineAndColumn) {
  const FormatError bad_value = parse_error("1 1:1\n\n-1 1:x\n");
  EXPECT_EQ(bad_value.line(), 3u);
  EXPECT_EQ(bad_value.column(), 6u);
  EXPECT_EQ(parse_error("abc 1:1\n").column(), 1u);
  EXPECT_EQ(parse_error("1 1-1\n").column(), 3u);
  EXPECT_EQ(parse_error("1 0:1\n").column(), 3u);
}

TEST(Libsvm, EmptyInputRejected) {
  parse_error("");
  parse_error("# only a comment\n\n");
}

TEST(Libsvm, CommentsBlankLinesAndLabelMapping) {
  LibsvmOptions opt;
  opt.zero_to_minus_one = true;
  opt.min_dim = 5;
  const Dataset d = parse("# header\n0 1:1 # trailing\n\n1 2:3\r\n", opt);
  ASSERT_EQ(d.samples(), 2);
  EXPECT_EQ(d.dim(), 5);
  EXPECT_EQ(d.labels(0), -1.0);
  EXPECT_EQ(d.labels(1), 1.0);
  EXPECT_EQ(d.features(1, 1), 3.0);
}

TEST(Libsvm, MissingFileIsAConfigError) {
  EXPECT_THROW(parse_libsvm(fs::path("/nonexistent/dataset")), ConfigError);
}

TEST(Libsvm, RoundTripsSyntheticDatasets) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution sparse(0.3);
  for (int k = 0; k < 50; ++k) {
    const Index n = 1 + k % 17, d = 1 + k % 9;
    Dataset ds{Matrix::Zero(n, d), Vector(n)};
    for (Index i = 0; i < n; ++i) {
      ds.labels(i) = normal(rng) * 1e3;
      for (Index j = 0; j < d; ++j)
        if (sparse(rng)) ds.features(i, j) = normal(rng) * std::pow(10.0, double(j % 5) - 2);
    }
    ds.features(0, d - 1) = 1.0;  // fix the dimension
    std::ostringstream out;
    write_libsvm(out, ds);
    const Dataset back = parse(out.str());
    EXPECT_EQ(back.features, ds.features);
    EXPECT_EQ(back.labels, ds.labels);
  }
}

// independent oracle: count rows and the largest index with plain stream ops
std::pair<Index, Index> naive_scan(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  Index rows = 0, dim = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    ++rows;
    while (ls >> tok) dim = std::max<Index>(dim, std::stol(tok.substr(0, tok.find(':'))));
  }
  return {rows, dim};
}

TEST(Libsvm, DatasetFileMatchesNaiveScan) {
  const fs::path path = fs::path(EXTRA_NEWTON_DATA_DIR) / "a1a_like";
  const Dataset ds = parse_libsvm(path);
  const auto [rows, dim] = naive_scan(path);
  EXPECT_EQ(ds.samples(), rows);
  EXPECT_EQ(ds.dim(), dim);
  EXPECT_NO_THROW(ds.validate(true));
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.name = "rt";
  c.problem.kind = "quadratic";
  c.problem.dim = 7;
  c.problem.condition = 12.5;
  c.set.kind = "box";
  c.set.lower = -0.25;
  c.oracle.mode = OracleMode::additive_noise;
  c.oracle.sigma_g = 0.3;
  c.oracle.seed = 123456789012345ull;
  c.algorithm.gamma = 0.1;
  c.algorithm.taylor_factor = 0.5;
  c.horizon = 37;
  c.trials = 3;
  c.x_init = std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  const Json j = to_json(c);
  const RunConfig back = run_config_from_json(j, ".");
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.oracle.seed, c.oracle.seed);
  EXPECT_EQ(*back.algorithm.gamma, 0.1);
}

TEST(RunConfig, UnknownKeysAndBadValuesRejected) {
  Json j = to_json(RunConfig{});
  j["problem"]["colour"] = "red";
  EXPECT_THROW(run_config_from_json(j, "."), ConfigError);
  Json t = to_json(RunConfig{});
  t["trials"] = 0;
  EXPECT_THROW(run_config_from_json(t, "."), ConfigError);
  Json f = to_json(RunConfig{});
  f["algorithm"]["taylor_factor"] = 0.7;
  EXPECT_THROW(run_config_from_json(f, "."), ConfigError);
  Json d = to_json(RunConfig{});
  d["problem"]["kind"] = "logistic";
  d["problem"]["dataset"] = "no_such_file";
  EXPECT_THROW(run_config_from_json(d, "."), ConfigError);
}

TEST(RunConfig, OverridesUseShortAndDottedKeys) {
  Json j = to_json(RunConfig{});
  apply_override(j, "T=55");
  apply_override(j, "oracle.sigma_g=0.5");
  apply_override(j, "mode=additive_noise");
  apply_override(j, "p=3");
  const RunConfig c = run_config_from_json(j, ".");
  EXPECT_EQ(c.horizon, 55);
  EXPECT_EQ(c.oracle.sigma_g, 0.5);
  EXPECT_EQ(c.oracle.mode, OracleMode::additive_noise);
  EXPECT_EQ(c.algorithm.p, 3.0);
  EXPECT_THROW(apply_override(j, "no_equals_sign"), ConfigError);
}

RunRecord sample_record() {
  RunRecord rec;
  rec.config = to_json(RunConfig{});
  rec.metadata = Json{{"seed", 4}, {"version", "x"}};
  for (int t = 1; t <= 25; ++t) {
    rec.series.push_back(
        SeriesRow{t, 1.0 / (t * t * 3.0), 0.1 / t, 1e-3 * t, 2 * t, t, 0.125 * t});
  }
  CheckReport c;
  c.name = "conversion";
  c.tolerance = 1e-8;
  c.slacks = {0.5, 1.0 / 3.0};
  c.finish();
  rec.checks = {c, CheckReport::skipped("template_inequality", "skipped (expectation-only bound)")};
  return rec;
}

TEST(RunRecord, WriteReadRoundTrip) {
  const fs::path dir = scratch_dir("roundtrip");
  const RunRecord rec = sample_record();
  write_run_record(rec, dir);
  const RunRecord back = read_run_record(dir);
  EXPECT_EQ(back.config, rec.config);
  EXPECT_EQ(back.metadata, rec.metadata);
  EXPECT_EQ(back.series, rec.series);
  ASSERT_EQ(back.checks.size(), 2u);
  EXPECT_EQ(back.checks[0].slacks, rec.checks[0].slacks);
  EXPECT_EQ(back.checks[0].status, CheckStatus::passed);
  EXPECT_EQ(back.checks[1].status, CheckStatus::skipped);
  EXPECT_EQ(back.checks[1].worst_margin, rec.checks[1].worst_margin);

  std::ifstream csv(dir / "series.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "t,f_gap,gamma,residual,grad_calls,hess_calls,wall_ms");
}

TEST(RunRecord, MissingSeriesIsAnIntegrityError) {
  const fs::path dir = scratch_dir("missing");
  write_run_record(sample_record(), dir);
  fs::remove(dir / "series.csv");
  try {
    read_run_record(dir);
    FAIL();
  } catch (const IntegrityError& e) {
    EXPECT_EQ(e.field(), "series.csv");
  }
}

TEST(RunRecord, TamperedSeriesDetected) {
  const fs::path dir = scratch_dir("tampered");
  write_run_record(sample_record(), dir);
  std::string text;
  {
    std::ifstream in(dir / "series.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  text[text.find("\n2,") + 1] = '3';
  write_text_file(dir / "series.csv", text);
  EXPECT_THROW(read_run_record(dir), IntegrityError);
}

TEST(RunRecord, CorruptJsonDetected) {
  const fs::path dir = scratch_dir("corrupt");
  write_run_record(sample_record(), dir);
  write_text_file(dir / "checks.json", "{\"format_version\": 1, \"checks\": [");
  try {
    read_run_record(dir);
    FAIL();
  } catch (const IntegrityError& e) {
    EXPECT_EQ(e.field(), "checks.json");
  }
  write_run_record(sample_record(), dir);
  write_text_file(dir / "config.json", "{}");
  EXPECT_THROW(read_run_record(dir), IntegrityError);
}

TEST(RunRecord, TruncatedSeriesRowDetected) {
  EXPECT_THROW(parse_series_csv(std::string(kSeriesHeader) + "\n1,2,3\n"), IntegrityError);
  EXPECT_THROW(parse_series_csv("t,gap\n"), IntegrityError);
}

}  // namespace
}  // namespace extra_newton
