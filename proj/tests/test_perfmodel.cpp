// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "psdc/errors.hpp"
#include "psdc/perfmodel.hpp"

using namespace psdc;

TEST_CASE("theoretical speedup") {
  CHECK(theoretical_speedup(4, 0.0) == 3.25);
  CHECK(theoretical_speedup(4, 0.3) == doctest::Approx(3.39).epsilon(0.005 / 3.39));
  CHECK(std::abs(theoretical_speedup(4, 1e6) - 4.0) < 1e-4);
  CHECK(theoretical_speedup(1, 0.5) == 1.0);
  for (int m = 2; m <= 8; ++m) {
    CHECK(theoretical_speedup(m, 0.0) < theoretical_speedup(m, 1.0));
    CHECK(theoretical_speedup(m, 1.0) < m);
  }
  CHECK_THROWS_AS(theoretical_speedup(0, 0.0), ParameterError);
  CHECK_THROWS_AS(theoretical_speedup(4, -0.1), ParameterError);
}

TEST_CASE("step costs follow the node-update count") {
  const PerfModel m{4, 4, 2.0, 3.0, 0.5};
  const StepCosts c = step_costs(m);
  CHECK(c.sequential == doctest::Approx(2.0 + 3 * 4 * 5.5 + 3.0));
  CHECK(c.parallel == doctest::Approx(2.0 + 3 * 5.5 + 3.0));
  const PerfModel zero_extra{4, 4, 1.0, 1.0, 0.0};
  const StepCosts z = step_costs(zero_extra);
  CHECK(z.sequential / z.parallel == doctest::Approx(theoretical_speedup(4, 0.0)));
  CHECK_THROWS_AS(step_costs(PerfModel{0, 4, 1, 1, 0}), ParameterError);
  CHECK_THROWS_AS(step_costs(PerfModel{4, 4, -1, 1, 0}), ParameterError);
}

TEST_CASE("cost fit recovers synthetic stage timings") {
  const double ce = 1.5e-3, cs = 0.7e-3;
  std::vector<StepReport> reports;
  for (int i = 0; i < 5; ++i) {
    StepReport r;
    const double noise = 1.0 + 1e-3 * (i - 2);
    r.init_s = ce * noise;
    r.sweeps_s = 3 * 4 * (ce + cs) * noise;
    r.last_node_s = cs * noise;
    r.wall_s = r.init_s + r.sweeps_s + r.last_node_s;
    reports.push_back(r);
  }
  const PerfModel m = fit_costs(reports, 4, 4);
  CHECK(m.c_explicit == doctest::Approx(ce).epsilon(1e-2));
  CHECK(m.c_solve == doctest::Approx(cs).epsilon(1e-2));
  CHECK(m.num_nodes == 4);
  CHECK(m.sweeps == 4);
}

TEST_CASE("cost fit errors") {
  std::vector<StepReport> two(2);
  CHECK_THROWS_AS(fit_costs(two, 4, 4), FitError);
  std::vector<StepReport> zeros(4);
  CHECK_THROWS_AS(fit_costs(zeros, 4, 4), FitError);
}

TEST_CASE("report JSON carries model and speedups") {
  const PerfModel m{4, 4, 1.0, 1.0, 0.0};
  const auto j = nlohmann::json::parse(perf_report_json(m, 2.9));
  CHECK(j.at("S_theory").get<double>() == 3.25);
  CHECK(j.at("S_measured").get<double>() == 2.9);
  CHECK(j.at("M").get<int>() == 4);
  const PerfModel k2{4, 2, 1.0, 1.0, 0.0};
  const auto j2 = nlohmann::json::parse(perf_report_json(k2, 1.0));
  const StepCosts c = step_costs(k2);
  CHECK(j2.at("S_theory").get<double>() == doctest::Approx(c.sequential / c.parallel));
}
