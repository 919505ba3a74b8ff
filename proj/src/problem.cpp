// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "psdc/problem.hpp"

#include "psdc/errors.hpp"

namespace psdc {

SweepState initialize_sweep(const SplitProblem& problem, const State& u_n, int num_nodes) {
  if (num_nodes < 1) throw ParameterError("sweep state needs at least one node");
  u_n.require_finite();
  SweepState s;
  s.u0 = u_n;
  problem.eval_explicit(u_n, s.E0);
  problem.eval_implicit(u_n, s.I0);
  s.u.assign(num_nodes, s.u0);
  s.E.assign(num_nodes, s.E0);
  s.I.assign(num_nodes, s.I0);
  return s;
}

}  // namespace psdc
