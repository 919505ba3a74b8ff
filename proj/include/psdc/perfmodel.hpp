// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>

#include "psdc/integrators.hpp"

namespace psdc {

/// Cost model of one diagonal SDC step. c_explicit is the cost of one
/// tendency evaluation, c_solve of one implicit node solve, c_extra of any
/// additional explicit work per node update (zero for our problems).
struct PerfModel {
  int num_nodes = 4;
  int sweeps = 4;
  double c_explicit = 0.0;
  double c_solve = 0.0;
  double c_extra = 0.0;

  void validate() const;
};

struct StepCosts {
  double sequential = 0.0;
  double parallel = 0.0;
};

/// Stage sums: initialization c_E, sweeps 1..K-1 with M (sequential) or one
/// (parallel) node update of c_E + c_S + c~_E, and a final c_S.
StepCosts step_costs(const PerfModel& model);

/// Sequential/parallel cost ratio for K = M with r = c~_E / (c_E + c_S):
/// (1 + M (M-1)(1+r)) / (1 + (M-1)(1+r)).
double theoretical_speedup(int num_nodes, double ratio);

/// Least-squares fit of (c_E, c_S) to stage timings of sequential diagonal
/// SDC steps: init ~ c_E, sweeps ~ (K-1) M (c_E + c_S), last node ~ c_S.
/// c~_E is pinned to 0. Needs at least three samples with nonzero timings.
PerfModel fit_costs(std::span<const StepReport> reports, int num_nodes, int sweeps);

/// {"M","K","c_E","c_S","c_tilde_E","C_seq","C_par","S_theory","S_measured"}
std::string perf_report_json(const PerfModel& model, double measured_speedup);

}  // namespace psdc
