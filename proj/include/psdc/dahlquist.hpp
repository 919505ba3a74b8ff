// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <string>

#include "psdc/problem.hpp"

namespace psdc {

/// Split Dahlquist test equation du/dt = lambda_I u + lambda_E u on `width`
/// independent complex copies, stored as interleaved (re, im) pairs.
class DahlquistProblem final : public SplitProblem {
 public:
  DahlquistProblem(std::complex<double> lambda_implicit, std::complex<double> lambda_explicit,
                   std::size_t width = 1);

  std::string name() const override { return "dahlquist"; }
  std::size_t size() const override { return 2 * width_; }
  std::size_t dofs() const override { return width_; }

  std::complex<double> lambda_implicit() const noexcept { return lambda_i_; }
  std::complex<double> lambda_explicit() const noexcept { return lambda_e_; }
  std::size_t width() const noexcept { return width_; }

  /// State with every copy set to `value`.
  State uniform_state(std::complex<double> value) const;
  /// Copy `index` of a state.
  static std::complex<double> component(const State& u, std::size_t index) {
    return {u[2 * index], u[2 * index + 1]};
  }

 protected:
  void do_eval_explicit(const State& u, State& out) const override;
  void do_eval_implicit(const State& u, State& out) const override;
  void do_solve_implicit(double alpha, const State& rhs, const State& guess,
                         State& out) const override;

 private:
  std::complex<double> lambda_i_;
  std::complex<double> lambda_e_;
  std::size_t width_;
};

}  // namespace psdc
