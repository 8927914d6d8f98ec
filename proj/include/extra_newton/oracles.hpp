// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_ORACLES_HPP_
#define EXTRA_NEWTON_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "extra_newton/errors.hpp"
#include "extra_newton/numerics.hpp"
#include "extra_newton/problems.hpp"

namespace extra_newton {

enum class OracleMode { deterministic, additive_noise, minibatch };

inline std::string to_string(OracleMode m) {
  switch (m) {
    case OracleMode::deterministic: return "deterministic";
    case OracleMode::additive_noise: return "additive_noise";
    case OracleMode::minibatch: return "minibatch";
  }
  return "?";
}

inline OracleMode oracle_mode_from_string(const std::string& s) {
  if (s == "deterministic") return OracleMode::deterministic;
  if (s == "additive_noise" || s == "noisy") return OracleMode::additive_noise;
  if (s == "minibatch") return OracleMode::minibatch;
  throw ConfigError("unknown oracle mode '" + s + "'");
}

struct OracleConfig {
  OracleMode mode = OracleMode::deterministic;
  double sigma_g = 0.0;
  double sigma_h = 0.0;
  Index batch_size = 50;
  bool psd_repair = true;
  std::uint64_t seed = 0;

  void validate() const {
    if (!std::isfinite(sigma_g) || sigma_g < 0.0 || !std::isfinite(sigma_h) ||
        sigma_h < 0.0) {
      throw PreconditionError("noise levels must be finite and nonnegative");
    }
    if (batch_size < 1) throw PreconditionError("batch size must be >= 1");
  }

  bool stochastic() const {
    switch (mode) {
      case OracleMode::deterministic: return false;
      case OracleMode::additive_noise: return sigma_g > 0.0 || sigma_h > 0.0;
      case OracleMode::minibatch: return true;
    }
    return true;
  }
};

/// Coefficient on the Hessian term of the Taylor operator: 1 (default) or 1/2.
class TaylorFactor {
 public:
  constexpr TaylorFactor() = default;

  explicit TaylorFactor(double v) : value_(v) {
    if (v != 1.0 && v != 0.5) throw PreconditionError("Taylor factor must be 1 or 0.5");
  }

  static constexpr TaylorFactor full() { return TaylorFactor(); }
  static TaylorFactor half() { return TaylorFactor(0.5); }

  constexpr double value() const noexcept { return value_; }

 private:
  double value_ = 1.0;
};

struct Provenance {
  OracleMode mode = OracleMode::deterministic;
  double sigma_g = 0.0;
  double sigma_h = 0.0;
  std::vector<Index> batch;  // minibatch rows, ascending
  std::uint64_t stream = 0;
};

/// One gradient (and optionally Hessian) observation g(x, xi), H(x, xi).
struct OracleSample {
  Vector grad;
  std::optional<SymmetricOperator> hess;
  Provenance provenance;
};

/// Generator for the randomness xi of one stream. Pure function of
/// (seed, stream).
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream),
                    std::uint32_t(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Draws one oracle sample at x. Deterministic: exact derivatives.
/// Additive noise: grad + sigma_g z / sqrt(d) and a symmetric Gaussian
/// Hessian perturbation scaled so E||N||_F^2 = sigma_h^2, then PSD repair.
/// Minibatch: exact derivatives of the average loss over a uniformly drawn
/// batch without replacement (the same batch for gradient and Hessian).
inline OracleSample sample(const Objective& f, const OracleConfig& cfg, const Vector& x,
                           std::uint64_t stream, bool with_hessian = true) {
  cfg.validate();
  if (x.size() != f.dim()) throw DimensionError("oracle point dimension mismatch");
  if (!x.allFinite()) throw PreconditionError("oracle point is not finite");

  OracleSample out;
  out.provenance.mode = cfg.mode;
  out.provenance.stream = stream;

  switch (cfg.mode) {
    case OracleMode::deterministic: {
      out.grad = f.gradient(x);
      if (with_hessian) out.hess = f.hessian(x);
      break;
    }
    case OracleMode::additive_noise: {
      out.provenance.sigma_g = cfg.sigma_g;
      out.provenance.sigma_h = cfg.sigma_h;
      auto rng = stream_rng(cfg.seed, stream);
      std::normal_distribution<double> normal;
      const Index d = f.dim();
      out.grad = f.gradient(x);
      if (cfg.sigma_g > 0.0) {
        Vector z(d);
        for (Index i = 0; i < d; ++i) z(i) = normal(rng);
        out.grad += (cfg.sigma_g / std::sqrt(double(d))) * z;
      }
      if (with_hessian) {
        SymmetricOperator h = f.hessian(x);
        // zero Hessian noise leaves the exact Hessian untouched
        if (cfg.sigma_h > 0.0) {
          Matrix g(d, d);
          for (Index j = 0; j < d; ++j)
            for (Index i = 0; i < d; ++i) g(i, j) = normal(rng);
          const double scale = cfg.sigma_h / std::sqrt(double(d) * double(d + 1));
          // (G + G^T)/sqrt 2 has unit off-diagonal and variance-2 diagonal entries
          Matrix noisy = h.matrix() + (scale / std::sqrt(2.0)) * (g + g.transpose());
          h = symmetrize(noisy);
          if (cfg.psd_repair) h = project_psd(h);
        }
        out.hess = std::move(h);
      }
      break;
    }
    case OracleMode::minibatch: {
      const Index n = f.sample_count();
      if (n == 0) {
        throw UnsupportedModeError("minibatch oracle needs a finite-sum objective, got " +
                                   f.name());
      }
      auto rng = stream_rng(cfg.seed, stream);
      std::vector<Index> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), Index(0));
      std::vector<Index> batch;
      if (cfg.batch_size >= n) {
        batch = std::move(all);
      } else {
        batch.reserve(static_cast<std::size_t>(cfg.batch_size));
        std::sample(all.begin(), all.end(), std::back_inserter(batch), cfg.batch_size, rng);
      }
      out.grad = f.batch_gradient(x, batch);
      if (with_hessian) out.hess = f.batch_hessian(x, batch);
      out.provenance.batch = std::move(batch);
      break;
    }
  }
  return out;
}

/// F(x; anchor, xi) = g(anchor, xi) + factor H(anchor, xi) (x - anchor).
inline Vector taylor_operator(const OracleSample& s, const Vector& x, const Vector& anchor,
                              TaylorFactor tf = {}) {
  if (!s.hess) throw PreconditionError("Taylor operator needs a Hessian sample");
  if (x.size() != anchor.size() || x.size() != s.grad.size()) {
    throw DimensionError("Taylor operator dimension mismatch");
  }
  return s.grad + tf.value() * s.hess->apply(x - anchor);
}

/// ||g_lead - F(xbar; xtilde, xi)|| with g_lead drawn at xbar from fresh
/// randomness and s_anchor drawn at xtilde.
inline double step_residual(const OracleSample& s_anchor, const Vector& g_lead,
                            const Vector& xbar, const Vector& xtilde, TaylorFactor tf = {}) {
  return (g_lead - taylor_operator(s_anchor, xbar, xtilde, tf)).norm();
}

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_ORACLES_HPP_
