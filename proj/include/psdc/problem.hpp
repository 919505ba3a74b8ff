// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "psdc/state.hpp"

namespace psdc {

struct EvalCounters {
  std::uint64_t n_explicit = 0;  ///< f_E evaluations
  std::uint64_t n_implicit = 0;  ///< f_I evaluations
  std::uint64_t n_solve = 0;     ///< implicit solves

  friend bool operator==(const EvalCounters&, const EvalCounters&) = default;
  EvalCounters operator-(const EvalCounters& o) const {
    return {n_explicit - o.n_explicit, n_implicit - o.n_implicit, n_solve - o.n_solve};
  }
  EvalCounters& operator+=(const EvalCounters& o) {
    n_explicit += o.n_explicit;
    n_implicit += o.n_implicit;
    n_solve += o.n_solve;
    return *this;
  }
};

/// Initial value problem du/dt = f_I(u) + f_E(u) with a solver for
/// u - alpha * f_I(u) = beta.
///
/// The evaluation entry points are const and may be called concurrently from
/// several threads; implementations keep scratch memory per invocation or per
/// thread. Output buffers are resized to size() when needed. For
/// solve_implicit, `out` may alias `rhs`; for the tendencies it must not alias
/// `u`.
class SplitProblem {
 public:
  virtual ~SplitProblem() = default;

  virtual std::string name() const = 0;
  /// Number of reals in a state vector.
  virtual std::size_t size() const = 0;
  /// Degrees of freedom, used for time-per-DoF metrics.
  virtual std::size_t dofs() const = 0;

  State make_state() const { return State(size()); }

  void eval_explicit(const State& u, State& out) const {
    n_explicit_.fetch_add(1, std::memory_order_relaxed);
    prepare(out);
    do_eval_explicit(u, out);
  }
  void eval_implicit(const State& u, State& out) const {
    n_implicit_.fetch_add(1, std::memory_order_relaxed);
    prepare(out);
    do_eval_implicit(u, out);
  }
  /// Solves out - alpha * f_I(out) = rhs. `guess` is a warm start that direct
  /// solvers ignore.
  void solve_implicit(double alpha, const State& rhs, const State& guess, State& out) const {
    n_solve_.fetch_add(1, std::memory_order_relaxed);
    prepare(out);
    do_solve_implicit(alpha, rhs, guess, out);
  }

  State f_explicit(const State& u) const {
    State out(size());
    eval_explicit(u, out);
    return out;
  }
  State f_implicit(const State& u) const {
    State out(size());
    eval_implicit(u, out);
    return out;
  }
  State implicit_solve(double alpha, const State& rhs, const State& guess) const {
    State out(size());
    solve_implicit(alpha, rhs, guess, out);
    return out;
  }

  EvalCounters counters() const {
    return {n_explicit_.load(std::memory_order_relaxed), n_implicit_.load(std::memory_order_relaxed),
            n_solve_.load(std::memory_order_relaxed)};
  }
  void reset_counters() {
    n_explicit_.store(0);
    n_implicit_.store(0);
    n_solve_.store(0);
  }

 protected:
  virtual void do_eval_explicit(const State& u, State& out) const = 0;
  virtual void do_eval_implicit(const State& u, State& out) const = 0;
  virtual void do_solve_implicit(double alpha, const State& rhs, const State& guess,
                                 State& out) const = 0;

 private:
  void prepare(State& out) const {
    if (out.size() != size()) out = State(size());
  }

  mutable std::atomic<std::uint64_t> n_explicit_{0};
  mutable std::atomic<std::uint64_t> n_implicit_{0};
  mutable std::atomic<std::uint64_t> n_solve_{0};
};

/// Node solutions and tendency evaluations of one SDC step (Radau nodes).
struct SweepState {
  State u0, E0, I0;
  std::vector<State> u, E, I;

  int num_nodes() const noexcept { return static_cast<int>(u.size()); }
};

/// Evaluates f_E and f_I once at u_n and copies (u_n, E0, I0) into every
/// node slot. Throws NumericalError if u_n is not finite.
SweepState initialize_sweep(const SplitProblem& problem, const State& u_n, int num_nodes);

}  // namespace psdc
