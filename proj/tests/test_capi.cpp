// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "psdc/psdc.h"

namespace fs = std::filesystem;

namespace {

std::string write_config(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("psdc_capi_" + name + ".json");
  std::ofstream(p) << text;
  return p.string();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PSDC_BENCH_EXE) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("Dahlquist integration through the C interface") {
  psdc_problem* p = nullptr;
  REQUIRE(psdc_dahlquist_create(-1.0, 0.0, 0.2, 0.0, 1, &p) == PSDC_OK);
  CHECK(psdc_problem_size(p) == 2);
  psdc_stepper_params sp;
  psdc_stepper_params_default(&sp);
  psdc_stepper* s = nullptr;
  REQUIRE(psdc_stepper_create(&sp, &s) == PSDC_OK);
  double u[2] = {1.0, 0.0};
  psdc_step_report rep;
  REQUIRE(psdc_stepper_step(s, p, u, 0.1, &rep) == PSDC_OK);
  CHECK(rep.counts.n_explicit == 13);
  CHECK(rep.counts.n_implicit == 13);
  CHECK(rep.counts.n_solve == 13);
  REQUIRE(psdc_integrate(s, p, u, 0.1, 9, nullptr) == PSDC_OK);
  CHECK(u[0] == doctest::Approx(std::exp(-0.8)).epsilon(1e-6));
  psdc_counters c;
  REQUIRE(psdc_problem_counters(p, &c) == PSDC_OK);
  CHECK(c.n_solve == 130);
  psdc_problem_reset_counters(p);
  REQUIRE(psdc_problem_counters(p, &c) == PSDC_OK);
  CHECK(c.n_solve == 0);
  psdc_stepper_destroy(s);
  psdc_problem_destroy(p);
}

TEST_CASE("error codes and messages") {
  psdc_problem* p = nullptr;
  CHECK(psdc_dahlquist_create(-1.0, 0.0, 0.0, 0.0, 0, &p) == PSDC_ERR_PARAMETER);
  CHECK(std::string(psdc_last_error()).find("width") != std::string::npos);
  CHECK(psdc_radau_right_nodes(0, nullptr) == PSDC_ERR_PARAMETER);
  double x = 0.0;
  CHECK(psdc_theoretical_speedup(4, -1.0, &x) == PSDC_ERR_PARAMETER);
  psdc_stepper_params sp;
  psdc_stepper_params_default(&sp);
  sp.time_threads = 9;
  psdc_stepper* s = nullptr;
  CHECK(psdc_stepper_create(&sp, &s) == PSDC_ERR_PARAMETER);

  REQUIRE(psdc_dahlquist_create(0.0, 0.0, 800.0, 0.0, 1, &p) == PSDC_OK);
  sp.scheme = PSDC_SCHEME_IMEX_O2;
  sp.time_threads = 1;
  REQUIRE(psdc_stepper_create(&sp, &s) == PSDC_OK);
  double u[2] = {1.0, 0.0};
  size_t failed = 0;
  CHECK(psdc_integrate(s, p, u, 1.0, 500, &failed) == PSDC_ERR_DIVERGENCE);
  CHECK(failed > 1);
  CHECK(psdc_swe_jet_state(p, nullptr, u) == PSDC_ERR_PARAMETER);
  psdc_stepper_destroy(s);
  psdc_problem_destroy(p);

  double ignored = 0.0;
  size_t size = 0;
  CHECK(psdc_snapshot_read("/nonexistent/snap.bin", nullptr, &ignored, nullptr, &size) == PSDC_ERR_IO);
}

TEST_CASE("collocation and performance model helpers") {
  double nodes[3];
  REQUIRE(psdc_radau_right_nodes(3, nodes) == PSDC_OK);
  CHECK(nodes[0] == doctest::Approx((4.0 - std::sqrt(6.0)) / 10.0));
  CHECK(nodes[2] == 1.0);
  double q[4];
  REQUIRE(psdc_quadrature_matrix(2, q) == PSDC_OK);
  CHECK(q[0] == doctest::Approx(5.0 / 12.0));
  CHECK(q[3] == doctest::Approx(0.25));
  double seq = 0.0, par = 0.0, sp = 0.0;
  REQUIRE(psdc_perf_step_costs(4, 4, 1.0, 1.0, 0.0, &seq, &par) == PSDC_OK);
  REQUIRE(psdc_theoretical_speedup(4, 0.0, &sp) == PSDC_OK);
  CHECK(seq / par == doctest::Approx(sp));
  CHECK(sp == 3.25);
}

TEST_CASE("SWE state and snapshot through the C interface") {
  psdc_swe_params params;
  psdc_swe_params_default(&params);
  params.n = 16;
  psdc_problem* p = nullptr;
  REQUIRE(psdc_swe_create(&params, &p) == PSDC_OK);
  psdc_jet_params jet;
  psdc_jet_params_default(&jet, params.length);
  jet.width = 0.08 * params.length;
  std::vector<double> u(psdc_problem_size(p));
  REQUIRE(psdc_swe_jet_state(p, &jet, u.data()) == PSDC_OK);
  const std::string path = (fs::temp_directory_path() / "psdc_capi_snap.bin").string();
  REQUIRE(psdc_snapshot_write(path.c_str(), p, u.data(), 42.0) == PSDC_OK);
  psdc_swe_params back;
  double t = 0.0;
  size_t size = 0;
  REQUIRE(psdc_snapshot_read(path.c_str(), &back, &t, nullptr, &size) == PSDC_OK);
  CHECK(size == u.size());
  CHECK(back.n == 16);
  CHECK(t == 42.0);
  std::vector<double> v(size);
  REQUIRE(psdc_snapshot_read(path.c_str(), nullptr, nullptr, v.data(), &size) == PSDC_OK);
  CHECK(v == u);
  fs::remove(path);
  psdc_problem_destroy(p);
}

TEST_CASE("bench entry point and CLI exit codes") {
  const std::string out = (fs::temp_directory_path() / "psdc_capi_bench").string();
  fs::remove_all(out);
  const std::string good = write_config("good", R"({
    "problem": {"type": "dahlquist", "lambda_I": -1.0, "lambda_E": 0.2},
    "stepper": {"scheme": "dsdc", "M": 2, "dt": 0.1},
    "threads": {"core_budget": 2},
    "run": {"T": 1.0, "reps": 1}
  })");
  psdc_bench_options opts{};
  opts.out_dir = out.c_str();
  CHECK(psdc_bench_execute("run", good.c_str(), &opts) == PSDC_OK);
  CHECK(fs::exists(fs::path(out) / "run_report.json"));
  CHECK(psdc_bench_execute("bogus", good.c_str(), &opts) == PSDC_ERR_CONFIG);
  opts.metric = "max";
  CHECK(psdc_bench_execute("run", good.c_str(), &opts) == PSDC_ERR_CONFIG);

  const std::string bad = write_config("bad", R"({"stepper": {"scheme": "rk4"}})");
  const std::string diverging = write_config("diverging", R"({
    "problem": {"type": "dahlquist", "lambda_I": 0.0, "lambda_E": 800.0},
    "stepper": {"scheme": "imex-o2", "dt": 1.0},
    "threads": {"core_budget": 1},
    "run": {"T": 500.0, "reps": 1}
  })");
  CHECK(run_cli("run --config " + good + " --out " + out) == 0);
  CHECK(run_cli("run --config " + bad + " --out " + out) == 2);
  CHECK(run_cli("run --config " + diverging + " --out " + out) == 3);
  CHECK(run_cli("run --config " + good + " --metric max") == 2);
  CHECK(run_cli("run --config /nonexistent.json") == 2);
  CHECK(run_cli("run --config " + good + " --out " + out + " --time-threads 2") == 0);
  CHECK(run_cli("run --config " + good + " --out " + out + " --space-threads 2 --time-threads 2") == 2);
  fs::remove_all(out);
}
