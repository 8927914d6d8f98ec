// Copyright 2026 The Extra-Newton Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");

#ifndef EXTRA_NEWTON_ERRORS_HPP_
#define EXTRA_NEWTON_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace extra_newton {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A violated precondition (invalid argument, broken theorem hypothesis,
/// indefinite subproblem, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Factorization or eigensolver breakdown.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Iterative method hit its cap. Carries the last residual seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (last residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Root bracket without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Oracle mode not supported by the objective (e.g. minibatch on a
/// non-finite-sum objective).
class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Line and column are 1-based; 0 means unknown.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Persisted run record is partial or corrupt.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& field, const std::string& what)
      : Error("integrity error in '" + field + "': " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Invalid run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Iterates blew up (objective far above its starting value).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace extra_newton

#endif  // EXTRA_NEWTON_ERRORS_HPP_
