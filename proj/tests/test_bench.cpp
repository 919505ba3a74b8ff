// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "psdc/bench.hpp"
#include "psdc/errors.hpp"
#include "psdc/snapshot.hpp"

using namespace psdc;
using namespace psdc::bench;
namespace fs = std::filesystem;

namespace {

std::string out_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("psdc_bench_" + name);
  fs::remove_all(p);
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kDahlquistConfig = R"({
  "problem": {"type": "dahlquist", "lambda_I": -1.0, "lambda_E": [0.2, 0.1], "u0": 1.0},
  "stepper": {"scheme": "dsdc", "M": 3, "dt": 0.1},
  "threads": {"space": 1, "time": 1, "core_budget": 4},
  "run": {"T": 1.0, "checkpoint_interval": 0.5, "reps": 1},
  "work_precision": [
    {"scheme": "dsdc", "M": 3, "dt_list": [0.1, 0.05, 0.25]},
    {"scheme": "imex-o2", "dt_list": [0.1, 0.05]}
  ],
  "scaling": {"splits": [[1, 2], [2, 2], {"space": 1, "time": 3}]},
  "speedup": {"base": {"scheme": "dsdc", "M": 3, "dt": 0.1},
              "candidates": [{"scheme": "dsdc", "M": 3, "dt": 0.1, "time": 3},
                             {"scheme": "imex-o2", "dt": 0.1}]}
})";

}  // namespace

TEST_CASE("configuration parsing") {
  const ExperimentConfig cfg = parse_config(kDahlquistConfig);
  CHECK(cfg.problem.kind == ProblemSpec::Kind::Dahlquist);
  CHECK(cfg.problem.lambda_explicit == std::complex<double>(0.2, 0.1));
  CHECK(cfg.stepper.label() == "dsdc-M3K3");
  CHECK(cfg.core_budget == 4);
  CHECK(cfg.checkpoint_interval == 0.5);
  CHECK(cfg.work_precision.size() == 2);
  CHECK(cfg.splits.size() == 3);
  CHECK(cfg.splits[2].time == 3);
  REQUIRE(cfg.speedup_base.has_value());
  CHECK(cfg.speedup_candidates.at(0).threads.time == 3);
  CHECK(cfg.reference.scheme == "imex-o2");
}

TEST_CASE("SWE configuration defaults the jet to the domain centre") {
  const ExperimentConfig cfg =
      parse_config(R"({"problem": {"type": "swe", "N": 32, "L": 2e6, "jet": {"U0": 40}}})");
  CHECK(cfg.problem.kind == ProblemSpec::Kind::PlanarSwe);
  CHECK(cfg.problem.swe.n == 32);
  CHECK(cfg.problem.jet.u0 == 40.0);
  CHECK(cfg.problem.jet.y0 == doctest::Approx(1e6));
  CHECK(cfg.problem.jet.width == doctest::Approx(1e5));
}

TEST_CASE("invalid configurations raise ConfigError") {
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"stepper": {"scheme": "rk4"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"type": "sphere"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"metric": "max"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"stepper": {"preconditioner": "lu"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"lambda_I": "x"}})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  ExperimentConfig cfg = parse_config(kDahlquistConfig);
  cfg.threads = {2, 3};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.threads = {1, 1};
  cfg.reps = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(steps_for(1.0, 0.3), ConfigError);
  CHECK(steps_for(1.0, 0.1) == 10);
  StepperSpec sdc;
  sdc.scheme = "sdc";
  CHECK_THROWS_AS(make_stepper(sdc, 2), ConfigError);
  StepperSpec many;
  many.num_nodes = 2;
  CHECK_THROWS_AS(make_stepper(many, 3), ConfigError);
}

TEST_CASE("error metric") {
  ObservedTrajectory a{{0.0, 1.0}, {{1.0, 2.0}, {3.0, 4.0}}, 0.25};
  ObservedTrajectory b = a;
  CHECK(error_linf_l2(a, b, false) == 0.0);
  CHECK(error_linf_l2(a, b, true) == 0.0);
  b.fields[1][0] = 3.5;
  const double abs_err = error_linf_l2(a, b, false);
  CHECK(abs_err == doctest::Approx(std::sqrt(0.25 * 0.25)));
  CHECK(error_linf_l2(b, a, false) == abs_err);
  ObservedTrajectory a2 = a, b2 = b;
  for (auto* t : {&a2, &b2})
    for (auto& f : t->fields)
      for (double& x : f) x *= 1e3;
  CHECK(error_linf_l2(a2, b2, true) == doctest::Approx(error_linf_l2(a, b, true)));
  CHECK(error_linf_l2(a, b, true) == doctest::Approx(abs_err / std::sqrt(0.25 * (3.5 * 3.5 + 16.0))));
  ObservedTrajectory short_traj{{0.0}, {{1.0, 2.0}}, 1.0};
  CHECK_THROWS_AS(error_linf_l2(short_traj, a, false), ValidationError);
  ObservedTrajectory shifted = a;
  shifted.times[1] = 1.5;
  CHECK_THROWS_AS(error_linf_l2(shifted, a, false), ValidationError);
}

TEST_CASE("run writes a report and checkpoints") {
  ExperimentConfig cfg = parse_config(kDahlquistConfig);
  cfg.out_dir = out_dir("run");
  const RunResult r = run(cfg);
  CHECK(r.trajectory.times.size() == 3);
  const auto report = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "run_report.json"));
  CHECK(report.at("n_steps").get<int>() == 10);
  CHECK(report.at("steps").size() == 10);
  CHECK(report.at("counts").at("n_fE").get<int>() == 10 * (1 + 2 * 3));
  CHECK(report.at("environment").contains("hardware_concurrency"));
  CHECK(report.at("final").at("hash").get<std::string>().size() == 16);
  const std::string csv = slurp(fs::path(cfg.out_dir) / "checkpoints.csv");
  CHECK(csv.rfind("time,norm\n", 0) == 0);
  // Same config, same bits.
  CHECK(run(cfg, false).final_hash == r.final_hash);
}

TEST_CASE("SWE run writes snapshots") {
  ExperimentConfig cfg = parse_config(R"({
    "problem": {"type": "swe", "N": 16, "jet": {"L_jet": 8e5}},
    "stepper": {"scheme": "dsdc", "M": 2, "dt": 600},
    "threads": {"core_budget": 2},
    "run": {"T": 1200}
  })");
  cfg.out_dir = out_dir("swe");
  const RunResult r = run(cfg);
  const Snapshot snap = read_snapshot((fs::path(cfg.out_dir) / "final_state.bin").string());
  CHECK(snap.time == 1200.0);
  CHECK(state_hash(snap.state) == r.final_hash);
  CHECK(fs::exists(fs::path(cfg.out_dir) / "final_state.json"));
}

TEST_CASE("work-precision points are ordered and errors shrink") {
  ExperimentConfig cfg = parse_config(kDahlquistConfig);
  cfg.out_dir = out_dir("wp");
  const auto pts = work_precision(cfg);
  REQUIRE(pts.size() == 5);
  CHECK(pts[0].scheme == "dsdc-M3K3");
  CHECK(pts[0].dt == 0.25);
  CHECK(pts[2].dt == 0.05);
  CHECK(pts[3].scheme == "imex-o2");
  CHECK(pts[1].error < pts[0].error);
  CHECK(pts[4].error < pts[3].error);
  const std::string csv = slurp(fs::path(cfg.out_dir) / "work_precision.csv");
  CHECK(csv.rfind("scheme,dt,wall_s,error\n", 0) == 0);
  cfg.reference.dt = 0.05;
  CHECK_THROWS_AS(work_precision(cfg, false), ConfigError);
}

TEST_CASE("work-precision flags diverged points") {
  ExperimentConfig cfg = parse_config(R"({
    "problem": {"type": "dahlquist", "lambda_I": 0.0, "lambda_E": [0.0, 3.0]},
    "run": {"T": 500.0, "reps": 1},
    "threads": {"core_budget": 1},
    "reference": {"dt": 0.001},
    "work_precision": [{"scheme": "imex-o2", "dt_list": [1.0, 0.01]}]
  })");
  cfg.out_dir = out_dir("wp_div");
  const auto pts = work_precision(cfg);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].diverged);
  CHECK_FALSE(pts[1].diverged);
  CHECK(std::isfinite(pts[1].error));
  const std::string csv = slurp(fs::path(cfg.out_dir) / "work_precision.csv");
  CHECK(csv.find("imex-o2,1,diverged,diverged") != std::string::npos);
}

TEST_CASE("strong scaling skips splits over the budget") {
  ExperimentConfig cfg = parse_config(kDahlquistConfig);
  cfg.out_dir = out_dir("scaling");
  cfg.core_budget = 3;
  const auto rows = strong_scaling(cfg);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].split.total() == 1);
  CHECK(rows[0].status == "ok");
  CHECK(rows[0].time_per_dof > 0.0);
  CHECK(rows[2].status == "skipped");
  CHECK(rows[3].status == "ok");
  CHECK(fs::exists(fs::path(cfg.out_dir) / "scaling.csv"));
}

TEST_CASE("speedup report") {
  ExperimentConfig cfg = parse_config(kDahlquistConfig);
  cfg.out_dir = out_dir("speedup");
  const SpeedupTable t = speedup_report(cfg);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].comparable);
  CHECK(t.rows[0].error == doctest::Approx(t.base.error).epsilon(1e-12));
  CHECK_FALSE(t.rows[1].comparable);
  CHECK(t.s_theory == doctest::Approx(theoretical_speedup(3, 0.0)));
  const auto j = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "speedup.json"));
  CHECK(j.at("perf_model").contains("S_theory"));
}

TEST_CASE("perf-model experiment") {
  ExperimentConfig cfg = parse_config(R"({
    "problem": {"type": "swe", "N": 32},
    "stepper": {"scheme": "dsdc", "M": 4, "dt": 300},
    "threads": {"core_budget": 4},
    "run": {"T": 300, "reps": 3}
  })");
  cfg.out_dir = out_dir("perf");
  const PerfModelResult r = perf_model(cfg);
  CHECK(r.model.c_explicit > 0.0);
  CHECK(r.model.c_solve >= 0.0);
  CHECK(r.seq_step_s > 0.0);
  CHECK(r.measured_speedup > 0.0);
  const auto j = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "perf_model.json"));
  CHECK(j.at("S_theory").get<double>() == 3.25);
  CHECK(j.at("time_threads").get<int>() == 4);
}
