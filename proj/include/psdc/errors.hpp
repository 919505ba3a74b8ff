// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural requirement (mismatched checkpoints,
/// nonzero mean vorticity, malformed snapshot, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A run configuration is invalid or cannot be honoured.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state vector holds a NaN or Inf.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::size_t component)
      : Error(what), component_(component) {}
  std::size_t component() const noexcept { return component_; }

 private:
  std::size_t component_;
};

/// Time integration produced a non-finite state.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A multistep scheme was called without its required history.
class BootstrapError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit of cost coefficients has no unique solution.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace psdc
