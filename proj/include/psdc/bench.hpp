// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psdc/integrators.hpp"
#include "psdc/perfmodel.hpp"
#include "psdc/planar_swe.hpp"

namespace psdc::bench {

enum class ErrorMetric { RelativeLinfL2, AbsoluteLinfL2 };

struct ProblemSpec {
  enum class Kind { Dahlquist, PlanarSwe };
  Kind kind = Kind::Dahlquist;
  // Dahlquist
  std::complex<double> lambda_implicit{-1.0, 0.0};
  std::complex<double> lambda_explicit{0.0, 0.0};
  std::size_t width = 1;
  std::complex<double> initial{1.0, 0.0};
  // Planar SWE; space_threads is taken from the thread split.
  SweParams swe;
  JetConfig jet;
};

struct StepperSpec {
  std::string scheme = "dsdc";  ///< sdc | dsdc | imex-o2 | ab2-si
  int num_nodes = 4;
  int sweeps = 0;  ///< 0: K = M
  PreconditionerKind precond = PreconditionerKind::MinSrFlex;
  DtauIndexing explicit_dtau = DtauIndexing::AsWritten;
  double dt = 0.0;
  std::vector<double> dt_list;

  std::string label() const;
};

struct ThreadSplit {
  unsigned space = 1;
  unsigned time = 1;
  unsigned total() const { return space * time; }
};

struct SpeedupEntry {
  StepperSpec stepper;
  ThreadSplit threads;
};

struct ExperimentConfig {
  ProblemSpec problem;
  StepperSpec stepper;
  ThreadSplit threads;
  unsigned core_budget = 0;  ///< 0: hardware concurrency
  double t_end = 1.0;
  double checkpoint_interval = 0.0;  ///< 0: final state only
  int reps = 3;
  bool snapshots = true;
  ErrorMetric metric = ErrorMetric::RelativeLinfL2;
  StepperSpec reference = [] {
    StepperSpec s;
    s.scheme = "imex-o2";
    return s;
  }();
  std::vector<StepperSpec> work_precision;
  std::vector<ThreadSplit> splits;
  std::optional<SpeedupEntry> speedup_base;
  std::vector<SpeedupEntry> speedup_candidates;
  std::string out_dir = "out";

  unsigned effective_core_budget() const;
  void validate() const;
};

/// Parses the JSON configuration schema documented in the README.
/// Throws ConfigError on malformed or inconsistent input.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

std::unique_ptr<SplitProblem> make_problem(const ProblemSpec& spec, unsigned space_threads);
State make_initial_state(const ProblemSpec& spec, const SplitProblem& problem);
std::unique_ptr<Stepper> make_stepper(const StepperSpec& spec, unsigned time_threads);

/// Number of steps of size dt covering t_end; throws ConfigError unless dt divides t_end.
std::size_t steps_for(double t_end, double dt);

/// The field compared by the error metric: physical vorticity for the SWE
/// (weighted by the cell area), the raw state for Dahlquist.
struct ObservedTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> fields;
  double weight = 1.0;
};
ObservedTrajectory observe(const SplitProblem& problem, const Trajectory& traj);

/// max_t ||A(t) - B(t)||_2, divided by max_t ||B(t)||_2 when relative.
/// B is the reference. Throws ValidationError on checkpoint mismatch.
double error_linf_l2(const ObservedTrajectory& a, const ObservedTrajectory& b, bool relative);

struct RunResult {
  Trajectory trajectory;
  double wall_s = 0.0;
  std::uint64_t final_hash = 0;
};

/// Integrates cfg.stepper over [0, T] with cfg.threads; writes run_report.json,
/// checkpoints.csv and (SWE) final_state.bin to cfg.out_dir when `write` is set.
RunResult run(const ExperimentConfig& cfg, bool write = true);

struct WorkPrecisionPoint {
  std::string scheme;
  double dt = 0.0;
  double wall_s = 0.0;
  double error = 0.0;
  bool diverged = false;
};

/// One point per (scheme, dt) ordered by scheme then dt descending. Writes
/// work_precision.csv (scheme,dt,wall_s,error) and work_precision.json.
std::vector<WorkPrecisionPoint> work_precision(const ExperimentConfig& cfg, bool write = true);

struct ScalingRow {
  ThreadSplit split;
  double wall_s = 0.0;
  double time_per_dof = 0.0;
  std::size_t n_steps = 0;
  std::string status = "ok";  ///< ok | skipped
};

/// Minimum-of-reps wall time per thread split; (1,1) is always included.
/// Writes scaling.csv and scaling.json.
std::vector<ScalingRow> strong_scaling(const ExperimentConfig& cfg, bool write = true);

struct SpeedupRow {
  std::string label;
  SpeedupEntry entry;
  double wall_s = 0.0;
  double error = 0.0;
  double speedup = 0.0;
  bool comparable = true;
  bool diverged = false;
};

struct SpeedupTable {
  SpeedupRow base;
  std::vector<SpeedupRow> rows;
  double s_theory = 0.0;
  std::optional<double> s_measured;
};

/// Speedup of each candidate over the base configuration. Writes speedup.csv
/// and speedup.json (with the performance-model sidecar).
SpeedupTable speedup_report(const ExperimentConfig& cfg, bool write = true);

struct PerfModelResult {
  PerfModel model;
  double measured_speedup = 0.0;
  double seq_step_s = 0.0;
  double par_step_s = 0.0;
};

/// Times sequential and parallel diagonal SDC steps, fits the cost model and
/// writes perf_model.json.
PerfModelResult perf_model(const ExperimentConfig& cfg, bool write = true);

}  // namespace psdc::bench
