// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "psdc/perfmodel.hpp"

#include <cmath>

#include "json.hpp"
#include "psdc/errors.hpp"

namespace psdc {

void PerfModel::validate() const {
  if (num_nodes < 1 || sweeps < 1) throw ParameterError("perf model needs M, K >= 1");
  if (!(c_explicit >= 0.0 && c_solve >= 0.0 && c_extra >= 0.0)) {
    throw ParameterError("perf model costs must be non-negative");
  }
}

StepCosts step_costs(const PerfModel& model) {
  model.validate();
  const double node_update = model.c_explicit + model.c_solve + model.c_extra;
  const double sweeps = model.sweeps - 1;
  return {model.c_explicit + sweeps * model.num_nodes * node_update + model.c_solve,
          model.c_explicit + sweeps * node_update + model.c_solve};
}

double theoretical_speedup(int num_nodes, double ratio) {
  if (num_nodes < 1) throw ParameterError("speedup needs M >= 1");
  if (!(ratio >= 0.0)) throw ParameterError("cost ratio must be >= 0");
  const double m = num_nodes;
  const double g = (m - 1.0) * (1.0 + ratio);
  return (1.0 + m * g) / (1.0 + g);
}

PerfModel fit_costs(std::span<const StepReport> reports, int num_nodes, int sweeps) {
  if (reports.size() < 3) throw FitError("cost fit needs at least three step reports");
  if (num_nodes < 1 || sweeps < 1) throw FitError("cost fit needs M, K >= 1");
  // Unknowns x = (c_E, c_S). Rows per report:
  //   [1, 0] x = init,  [a, a] x = sweeps with a = (K-1) M,  [0, 1] x = last.
  const double a = static_cast<double>(sweeps - 1) * num_nodes;
  double ata00 = 0, ata01 = 0, ata11 = 0, atb0 = 0, atb1 = 0;
  bool any_time = false;
  for (const StepReport& r : reports) {
    if (!(r.init_s >= 0 && r.sweeps_s >= 0 && r.last_node_s >= 0)) {
      throw FitError("negative or non-finite stage timing");
    }
    any_time = any_time || r.init_s > 0 || r.sweeps_s > 0 || r.last_node_s > 0;
    ata00 += 1 + a * a;
    ata01 += a * a;
    ata11 += a * a + 1;
    atb0 += r.init_s + a * r.sweeps_s;
    atb1 += a * r.sweeps_s + r.last_node_s;
  }
  if (!any_time) throw FitError("all stage timings are zero");
  const double det = ata00 * ata11 - ata01 * ata01;
  if (!(std::abs(det) > 0.0)) throw FitError("singular cost fit");
  PerfModel model;
  model.num_nodes = num_nodes;
  model.sweeps = sweeps;
  model.c_explicit = std::max(0.0, (ata11 * atb0 - ata01 * atb1) / det);
  model.c_solve = std::max(0.0, (ata00 * atb1 - ata01 * atb0) / det);
  model.c_extra = 0.0;
  return model;
}

std::string perf_report_json(const PerfModel& model, double measured_speedup) {
  const StepCosts c = step_costs(model);
  const double denom = model.c_explicit + model.c_solve;
  const double ratio = denom > 0.0 ? model.c_extra / denom : 0.0;
  const double s_theory = model.sweeps == model.num_nodes ? theoretical_speedup(model.num_nodes, ratio)
                          : c.parallel > 0.0                ? c.sequential / c.parallel
                                                            : 1.0;
  nlohmann::json j{{"M", model.num_nodes},
                   {"K", model.sweeps},
                   {"c_E", model.c_explicit},
                   {"c_S", model.c_solve},
                   {"c_tilde_E", model.c_extra},
                   {"C_seq", c.sequential},
                   {"C_par", c.parallel},
                   {"S_theory", s_theory},
                   {"S_measured", measured_speedup}};
  return j.dump(2);
}

}  // namespace psdc
