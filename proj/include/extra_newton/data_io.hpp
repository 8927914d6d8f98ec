// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_DATA_IO_HPP_
#define EXTRA_NEWTON_DATA_IO_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "extra_newton/baselines.hpp"
#include "extra_newton/diagnostics.hpp"
#include "extra_newton/errors.hpp"
#include "extra_newton/numerics.hpp"
#include "extra_newton/oracles.hpp"
#include "extra_newton/problems.hpp"

namespace extra_newton {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kSeriesHeader = "t,f_gap,gamma,residual,grad_calls,hess_calls,wall_ms";

// ---------------------------------------------------------------------------
// LIBSVM text format
//
//   <label> <index>:<value> <index>:<value> ...
//
// Indices are 1-based and strictly increasing within a line; they map to
// 0-based columns. Missing indices are zero. Text after '#' is a comment and
// blank lines are skipped.

struct LibsvmOptions {
  bool zero_to_minus_one = false;  // map label 0 to -1 (binary tasks)
  Index min_dim = 0;               // pad the feature dimension up to this
};

namespace detail {

inline bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

inline bool parse_index(std::string_view s, long long& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

}  // namespace detail

inline Dataset parse_libsvm(std::istream& in, const LibsvmOptions& opt = {}) {
  struct Row {
    double label;
    std::vector<std::pair<Index, double>> entries;
  };
  std::vector<Row> rows;
  Index dim = opt.min_dim;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    // tokens with their 1-based start column
    std::vector<std::pair<std::string_view, std::size_t>> tokens;
    std::size_t i = 0;
    while (i < view.size()) {
      while (i < view.size() && detail::is_space(view[i])) ++i;
      const std::size_t start = i;
      while (i < view.size() && !detail::is_space(view[i])) ++i;
      if (i > start) tokens.emplace_back(view.substr(start, i - start), start + 1);
    }
    if (tokens.empty()) continue;

    Row row;
    if (!detail::parse_double(tokens[0].first, row.label)) {
      throw FormatError("invalid label '" + std::string(tokens[0].first) + "'", line_no,
                        tokens[0].second);
    }
    if (opt.zero_to_minus_one && row.label == 0.0) row.label = -1.0;
    long long last = 0;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const auto [tok, col] = tokens[k];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw FormatError("expected <index>:<value>, got '" + std::string(tok) + "'", line_no,
                          col);
      }
      long long idx = 0;
      double val = 0.0;
      if (!detail::parse_index(tok.substr(0, colon), idx) || idx < 1) {
        throw FormatError("invalid feature index in '" + std::string(tok) + "'", line_no, col);
      }
      if (!detail::parse_double(tok.substr(colon + 1), val)) {
        throw FormatError("invalid feature value in '" + std::string(tok) + "'", line_no,
                          col + colon + 1);
      }
      if (idx <= last) {
        throw FormatError("feature index " + std::to_string(idx) +
                              " is not greater than the previous index " + std::to_string(last),
                          line_no, col);
      }
      last = idx;
      row.entries.emplace_back(Index(idx - 1), val);
      dim = std::max(dim, Index(idx));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("no data rows", line_no, 0);

  Dataset ds;
  ds.features = Matrix::Zero(Index(rows.size()), dim);
  ds.labels.resize(Index(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    ds.labels(Index(r)) = rows[r].label;
    for (const auto& [c, v] : rows[r].entries) ds.features(Index(r), c) = v;
  }
  return ds;
}

inline Dataset parse_libsvm(const std::filesystem::path& path, const LibsvmOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  return parse_libsvm(in, opt);
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_libsvm(std::ostream& out, const Dataset& ds) {
  ds.validate(false);
  for (Index r = 0; r < ds.samples(); ++r) {
    out << format_double(ds.labels(r));
    for (Index c = 0; c < ds.dim(); ++c) {
      if (ds.features(r, c) != 0.0) out << ' ' << (c + 1) << ':' << format_double(ds.features(r, c));
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Run configuration

struct ProblemSpec {
  std::string kind = "quadratic";  // quadratic | least_squares | logistic
  std::string dataset;             // LIBSVM file for least_squares / logistic
  Index max_samples = 0;           // 0 keeps every row; otherwise the first n rows
  Index min_dim = 0;
  double l2 = 0.0;
  bool zero_to_minus_one = false;
  Index dim = 2;  // synthetic quadratic
  double condition = 10.0;
  std::uint64_t seed = 0;
};

struct SetSpec {
  std::string kind = "ball";  // ball | box | simplex | unconstrained
  double radius = 1.0;
  double lower = -1.0;
  double upper = 1.0;
  double scale = 1.0;
};

struct AlgorithmSpec {
  std::string kind = "extra_newton";  // or a baseline name
  double p = 2.0;
  std::optional<double> gamma;  // extra_newton: defaults to the set diameter
  double gamma0 = 1.0;
  double taylor_factor = 1.0;
  std::optional<double> inner_tol;
  double step = 0.1;  // ProjGrad / NesterovAGD
  double l_hat = 1.0;  // RegularizedNewton
};

struct RunConfig {
  int format_version = kFormatVersion;
  std::string name = "run";
  ProblemSpec problem;
  SetSpec set;
  OracleConfig oracle;
  AlgorithmSpec algorithm;
  std::int64_t horizon = 100;
  int trials = 1;
  std::string output_dir;
  std::optional<std::vector<double>> x_init;  // nullopt means "auto"
  bool record_wall_time = false;
  double reference_tol = 1e-10;
  double hessian_weight = 1.0;

  void validate() const {
    if (format_version != kFormatVersion) {
      throw ConfigError("unsupported format_version " + std::to_string(format_version));
    }
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    static const char* kProblems[] = {"quadratic", "least_squares", "logistic"};
    static const char* kSets[] = {"ball", "box", "simplex", "unconstrained"};
    auto one_of = [](const std::string& v, const auto& list) {
      for (const char* s : list)
        if (v == s) return true;
      return false;
    };
    if (!one_of(problem.kind, kProblems)) throw ConfigError("unknown problem kind '" + problem.kind + "'");
    if (!one_of(set.kind, kSets)) throw ConfigError("unknown set kind '" + set.kind + "'");
    if (problem.kind != "quadratic") {
      if (problem.dataset.empty()) throw ConfigError("problem.dataset is required for " + problem.kind);
      if (!std::filesystem::exists(problem.dataset)) {
        throw ConfigError("dataset not found: " + problem.dataset);
      }
    } else if (problem.dim < 1 || !(problem.condition >= 1.0)) {
      throw ConfigError("quadratic needs dim >= 1 and condition >= 1");
    }
    if (algorithm.taylor_factor != 1.0 && algorithm.taylor_factor != 0.5) {
      throw ConfigError("algorithm.taylor_factor must be 1 or 0.5");
    }
    if (!(algorithm.p >= 2.0)) throw ConfigError("algorithm.p must be >= 2");
    if (algorithm.kind != "extra_newton") (void)baseline_kind_from_string(algorithm.kind);
    if (!(hessian_weight >= 0.0)) throw ConfigError("hessian_weight must be >= 0");
    try {
      oracle.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
};

namespace detail {

/// Reads optional keys out of a JSON object and rejects unknown ones.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.push_back(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }

  template <class T>
  void get(const char* key, std::optional<T>& out) {
    seen_.push_back(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }

  const Json& object(const char* key) {
    seen_.push_back(key);
    static const Json kEmpty = Json::object();
    return j_.contains(key) ? j_.at(key) : kEmpty;
  }

  void finish() const {
    for (const auto& [k, _] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), k) == seen_.end()) {
        throw ConfigError("unknown key '" + where_ + "." + k + "'");
      }
    }
  }

 private:
  const Json& j_;
  std::string where_;
  std::vector<std::string> seen_;
};

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace detail

inline Json to_json(const RunConfig& c) {
  Json j;
  j["format_version"] = c.format_version;
  j["name"] = c.name;
  j["problem"] = {{"kind", c.problem.kind},
                  {"dataset", c.problem.dataset},
                  {"max_samples", c.problem.max_samples},
                  {"min_dim", c.problem.min_dim},
                  {"l2", c.problem.l2},
                  {"zero_to_minus_one", c.problem.zero_to_minus_one},
                  {"dim", c.problem.dim},
                  {"condition", c.problem.condition},
                  {"seed", c.problem.seed}};
  j["set"] = {{"kind", c.set.kind},
              {"radius", c.set.radius},
              {"lower", c.set.lower},
              {"upper", c.set.upper},
              {"scale", c.set.scale}};
  j["oracle"] = {{"mode", to_string(c.oracle.mode)},
                 {"sigma_g", c.oracle.sigma_g},
                 {"sigma_h", c.oracle.sigma_h},
                 {"batch_size", c.oracle.batch_size},
                 {"psd_repair", c.oracle.psd_repair},
                 {"seed", c.oracle.seed}};
  j["algorithm"] = {{"kind", c.algorithm.kind},
                    {"p", c.algorithm.p},
                    {"gamma", detail::optional_json(c.algorithm.gamma)},
                    {"gamma0", c.algorithm.gamma0},
                    {"taylor_factor", c.algorithm.taylor_factor},
                    {"inner_tol", detail::optional_json(c.algorithm.inner_tol)},
                    {"step", c.algorithm.step},
                    {"l_hat", c.algorithm.l_hat}};
  j["horizon"] = c.horizon;
  j["trials"] = c.trials;
  j["output_dir"] = c.output_dir;
  j["x_init"] = c.x_init ? Json(*c.x_init) : Json("auto");
  j["record_wall_time"] = c.record_wall_time;
  j["reference_tol"] = c.reference_tol;
  j["hessian_weight"] = c.hessian_weight;
  return j;
}

/// Parses a config object. Relative dataset paths resolve against `base_dir`.
inline RunConfig run_config_from_json(const Json& j,
                                      const std::filesystem::path& base_dir = {}) {
  RunConfig c;
  detail::ObjectReader top(j, "config");
  top.get("format_version", c.format_version);
  top.get("name", c.name);
  {
    detail::ObjectReader r(top.object("problem"), "problem");
    r.get("kind", c.problem.kind);
    r.get("dataset", c.problem.dataset);
    r.get("max_samples", c.problem.max_samples);
    r.get("min_dim", c.problem.min_dim);
    r.get("l2", c.problem.l2);
    r.get("zero_to_minus_one", c.problem.zero_to_minus_one);
    r.get("dim", c.problem.dim);
    r.get("condition", c.problem.condition);
    r.get("seed", c.problem.seed);
    r.finish();
  }
  {
    detail::ObjectReader r(top.object("set"), "set");
    r.get("kind", c.set.kind);
    r.get("radius", c.set.radius);
    r.get("lower", c.set.lower);
    r.get("upper", c.set.upper);
    r.get("scale", c.set.scale);
    r.finish();
  }
  {
    detail::ObjectReader r(top.object("oracle"), "oracle");
    std::string mode = to_string(c.oracle.mode);
    r.get("mode", mode);
    c.oracle.mode = oracle_mode_from_string(mode);
    r.get("sigma_g", c.oracle.sigma_g);
    r.get("sigma_h", c.oracle.sigma_h);
    r.get("batch_size", c.oracle.batch_size);
    r.get("psd_repair", c.oracle.psd_repair);
    r.get("seed", c.oracle.seed);
    r.finish();
  }
  {
    detail::ObjectReader r(top.object("algorithm"), "algorithm");
    r.get("kind", c.algorithm.kind);
    r.get("p", c.algorithm.p);
    r.get("gamma", c.algorithm.gamma);
    r.get("gamma0", c.algorithm.gamma0);
    r.get("taylor_factor", c.algorithm.taylor_factor);
    r.get("inner_tol", c.algorithm.inner_tol);
    r.get("step", c.algorithm.step);
    r.get("l_hat", c.algorithm.l_hat);
    r.finish();
  }
  top.get("horizon", c.horizon);
  top.get("trials", c.trials);
  top.get("output_dir", c.output_dir);
  if (j.contains("x_init") && !(j.at("x_init").is_string() && j.at("x_init") == "auto")) {
    std::optional<std::vector<double>> x;
    top.get("x_init", x);
    c.x_init = x;
  } else {
    std::string ignored;
    top.get("x_init", ignored);
  }
  top.get("record_wall_time", c.record_wall_time);
  top.get("reference_tol", c.reference_tol);
  top.get("hessian_weight", c.hessian_weight);
  top.finish();

  if (!c.problem.dataset.empty() && !base_dir.empty()) {
    std::filesystem::path p(c.problem.dataset);
    if (p.is_relative()) c.problem.dataset = (base_dir / p).lexically_normal().string();
  }
  c.validate();
  return c;
}

/// Short override keys accepted in addition to dotted paths.
inline std::string canonical_override_key(const std::string& key) {
  static const std::map<std::string, std::string> kAliases = {
      {"T", "horizon"},
      {"p", "algorithm.p"},
      {"gamma", "algorithm.gamma"},
      {"gamma0", "algorithm.gamma0"},
      {"taylor_factor", "algorithm.taylor_factor"},
      {"algorithm", "algorithm.kind"},
      {"step", "algorithm.step"},
      {"l_hat", "algorithm.l_hat"},
      {"seed", "oracle.seed"},
      {"mode", "oracle.mode"},
      {"sigma_g", "oracle.sigma_g"},
      {"sigma_h", "oracle.sigma_h"},
      {"batch_size", "oracle.batch_size"},
      {"radius", "set.radius"},
      {"l2", "problem.l2"},
  };
  const auto it = kAliases.find(key);
  return it == kAliases.end() ? key : it->second;
}

/// Applies `key=value` to a config object. Values parse as JSON when they
/// can, and as plain strings otherwise.
inline void apply_override(Json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key=value, got '" + assignment + "'");
  }
  const std::string key = canonical_override_key(assignment.substr(0, eq));
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  Json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("bad override key '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    if (!node->contains(part)) (*node)[part] = Json::object();
    node = &(*node)[part];
    if (!node->is_object()) throw ConfigError("override key '" + key + "' is not an object path");
    start = dot + 1;
  }
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline RunConfig load_run_config(const std::filesystem::path& path,
                                 const std::vector<std::string>& overrides = {}) {
  Json j = read_json_file(path);
  for (const auto& o : overrides) apply_override(j, o);
  return run_config_from_json(j, path.parent_path());
}

// ---------------------------------------------------------------------------
// Run records: config.json + series.csv + checks.json

struct SeriesRow {
  std::int64_t t = 0;
  double f_gap = 0.0;
  double gamma = 0.0;
  double residual = 0.0;
  std::int64_t grad_calls = 0;  // cumulative
  std::int64_t hess_calls = 0;  // cumulative
  double wall_ms = 0.0;

  bool operator==(const SeriesRow&) const = default;
};

struct RunRecord {
  Json config;    // echo of the normalized RunConfig
  Json metadata;  // version, seed, trial, timestamp, f_star, ...
  std::vector<SeriesRow> series;
  std::vector<CheckReport> checks;
};

/// FNV-1a 64-bit hash, used to detect edits to series.csv.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string series_to_csv(const std::vector<SeriesRow>& rows) {
  std::string out = std::string(kSeriesHeader) + "\n";
  for (const SeriesRow& r : rows) {
    out += std::to_string(r.t) + "," + format_double(r.f_gap) + "," + format_double(r.gamma) +
           "," + format_double(r.residual) + "," + std::to_string(r.grad_calls) + "," +
           std::to_string(r.hess_calls) + "," + format_double(r.wall_ms) + "\n";
  }
  return out;
}

namespace detail {

inline double json_to_margin(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

inline Json margin_to_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace detail

inline Json to_json(const CheckReport& r) {
  Json slacks = Json::array();
  for (double s : r.slacks) slacks.push_back(detail::margin_to_json(s));
  return Json{{"name", r.name},
              {"status", to_string(r.status)},
              {"worst_margin", detail::margin_to_json(r.worst_margin)},
              {"tolerance", r.tolerance},
              {"note", r.note},
              {"slacks", slacks}};
}

inline CheckReport check_report_from_json(const Json& j) {
  CheckReport r;
  r.name = j.at("name").get<std::string>();
  r.status = check_status_from_string(j.at("status").get<std::string>());
  r.worst_margin = detail::json_to_margin(j.at("worst_margin"));
  r.tolerance = j.at("tolerance").get<double>();
  r.note = j.at("note").get<std::string>();
  for (const Json& s : j.at("slacks")) r.slacks.push_back(detail::json_to_margin(s));
  return r;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

inline void write_checks(const std::vector<CheckReport>& checks,
                         const std::filesystem::path& dir) {
  Json arr = Json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  write_text_file(dir / "checks.json",
                  Json{{"format_version", kFormatVersion}, {"checks", arr}}.dump(2) + "\n");
}

inline void write_run_record(const RunRecord& rec, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string csv = series_to_csv(rec.series);
  Json cfg{{"format_version", kFormatVersion},
           {"config", rec.config},
           {"metadata", rec.metadata},
           {"series_rows", rec.series.size()},
           {"series_checksum", hex64(fnv1a64(csv))}};
  write_text_file(dir / "series.csv", csv);
  write_checks(rec.checks, dir);
  write_text_file(dir / "config.json", cfg.dump(2) + "\n");
}

namespace detail {

inline std::string slurp(const std::filesystem::path& path, const std::string& field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError(field, "missing " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_record_json(const std::filesystem::path& path, const std::string& field) {
  const std::string text = slurp(path, field);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw IntegrityError(field, "corrupt JSON in " + path.string());
  if (!j.contains("format_version") || j.at("format_version") != kFormatVersion) {
    throw IntegrityError(field + ".format_version", "unsupported or missing format_version");
  }
  return j;
}

}  // namespace detail

inline std::vector<SeriesRow> parse_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSeriesHeader) {
    throw IntegrityError("series.csv:header", "unexpected header");
  }
  std::vector<SeriesRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string_view> f;
    std::string_view v(line);
    std::size_t start = 0;
    for (;;) {
      const auto comma = v.find(',', start);
      f.push_back(v.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    const std::string where = "series.csv:" + std::to_string(line_no);
    if (f.size() != 7) throw IntegrityError(where, "expected 7 fields");
    SeriesRow r;
    long long ti = 0, gi = 0, hi = 0;
    if (!detail::parse_index(f[0], ti) || !detail::parse_double(f[1], r.f_gap) ||
        !detail::parse_double(f[2], r.gamma) || !detail::parse_double(f[3], r.residual) ||
        !detail::parse_index(f[4], gi) || !detail::parse_index(f[5], hi) ||
        !detail::parse_double(f[6], r.wall_ms)) {
      throw IntegrityError(where, "non-numeric field");
    }
    r.t = ti;
    r.grad_calls = gi;
    r.hess_calls = hi;
    rows.push_back(r);
  }
  return rows;
}

inline RunRecord read_run_record(const std::filesystem::path& dir) {
  RunRecord rec;
  const Json cfg = detail::parse_record_json(dir / "config.json", "config.json");
  for (const char* key : {"config", "metadata", "series_rows", "series_checksum"}) {
    if (!cfg.contains(key)) throw IntegrityError(std::string("config.json:") + key, "missing field");
  }
  rec.config = cfg.at("config");
  rec.metadata = cfg.at("metadata");

  const std::string csv = detail::slurp(dir / "series.csv", "series.csv");
  if (hex64(fnv1a64(csv)) != cfg.at("series_checksum").get<std::string>()) {
    throw IntegrityError("series.csv", "checksum mismatch (file was modified)");
  }
  rec.series = parse_series_csv(csv);
  if (rec.series.size() != cfg.at("series_rows").get<std::size_t>()) {
    throw IntegrityError("series.csv", "row count differs from config.json");
  }

  const Json checks = detail::parse_record_json(dir / "checks.json", "checks.json");
  if (!checks.contains("checks") || !checks.at("checks").is_array()) {
    throw IntegrityError("checks.json:checks", "missing array");
  }
  try {
    for (const Json& c : checks.at("checks")) rec.checks.push_back(check_report_from_json(c));
  } catch (const Json::exception& e) {
    throw IntegrityError("checks.json:checks", e.what());
  } catch (const FormatError& e) {
    throw IntegrityError("checks.json:checks", e.what());
  }
  return rec;
}

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_DATA_IO_HPP_
