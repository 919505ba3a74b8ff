// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "psdc/dahlquist.hpp"

#include "psdc/errors.hpp"

namespace psdc {
namespace {

void multiply(std::complex<double> factor, const State& u, State& out) {
  const std::size_t n = u.size() / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> v = factor * std::complex<double>(u[2 * i], u[2 * i + 1]);
    out[2 * i] = v.real();
    out[2 * i + 1] = v.imag();
  }
}

}  // namespace

DahlquistProblem::DahlquistProblem(std::complex<double> lambda_implicit,
                                   std::complex<double> lambda_explicit, std::size_t width)
    : lambda_i_(lambda_implicit), lambda_e_(lambda_explicit), width_(width) {
  if (width == 0) throw ParameterError("Dahlquist width must be >= 1");
}

State DahlquistProblem::uniform_state(std::complex<double> value) const {
  State u(size());
  for (std::size_t i = 0; i < width_; ++i) {
    u[2 * i] = value.real();
    u[2 * i + 1] = value.imag();
  }
  return u;
}

void DahlquistProblem::do_eval_explicit(const State& u, State& out) const { multiply(lambda_e_, u, out); }

void DahlquistProblem::do_eval_implicit(const State& u, State& out) const { multiply(lambda_i_, u, out); }

void DahlquistProblem::do_solve_implicit(double alpha, const State& rhs, const State& /*guess*/,
                                         State& out) const {
  if (alpha == 0.0) {
    out.assign(rhs);
    return;
  }
  const std::complex<double> denom = 1.0 - alpha * lambda_i_;
  if (denom == 0.0) throw NumericalError("singular Dahlquist solve: alpha * lambda_I == 1", 0);
  for (std::size_t i = 0; i < width_; ++i) {
    const std::complex<double> v = std::complex<double>(rhs[2 * i], rhs[2 * i + 1]) / denom;
    out[2 * i] = v.real();
    out[2 * i + 1] = v.imag();
  }
}

}  // namespace psdc
