// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "psdc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "psdc/errors.hpp"
#include "psdc/perfmodel.hpp"
#include "psdc/snapshot.hpp"

namespace psdc::bench {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

std::ofstream open_output(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(fs::path(dir) / name);
  if (!os) throw Error("cannot write " + (fs::path(dir) / name).string());
  os << std::setprecision(17);
  return os;
}

std::string hex(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << v;
  return ss.str();
}

json environment() {
  auto env = [](const char* name) -> json {
    const char* v = std::getenv(name);
    return v ? json(v) : json(nullptr);
  };
  return {{"hardware_concurrency", std::thread::hardware_concurrency()},
          {"OMP_PLACES", env("OMP_PLACES")},
          {"OMP_PROC_BIND", env("OMP_PROC_BIND")}};
}

json counts_json(const EvalCounters& c) {
  return {{"n_fE", c.n_explicit}, {"n_fI", c.n_implicit}, {"n_solve", c.n_solve}};
}

std::size_t checkpoint_stride(const ExperimentConfig& cfg, double dt) {
  if (cfg.checkpoint_interval <= 0.0) return 0;
  return steps_for(cfg.checkpoint_interval, dt);
}

struct TimedRun {
  Trajectory trajectory;
  double wall_s = std::numeric_limits<double>::infinity();
  bool diverged = false;
};

// Every benchmark goes through integrate(); reps keep the fastest wall time.
TimedRun timed_integrate(const ExperimentConfig& cfg, const StepperSpec& spec, double dt,
                         ThreadSplit threads, int reps) {
  auto problem = make_problem(cfg.problem, threads.space);
  const State u0 = make_initial_state(cfg.problem, *problem);
  // Only the diagonal sweep uses time threads.
  auto stepper = make_stepper(spec, spec.scheme == "dsdc" ? threads.time : 1);
  const std::size_t n_steps = steps_for(cfg.t_end, dt);
  const std::size_t stride = checkpoint_stride(cfg, dt);
  TimedRun out;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    try {
      Trajectory traj = integrate(*problem, u0, dt, n_steps, *stepper, stride);
      out.wall_s = std::min(out.wall_s, std::chrono::duration<double>(Clock::now() - t0).count());
      out.trajectory = std::move(traj);
    } catch (const DivergenceError&) {
      out.diverged = true;
      return out;
    }
  }
  return out;
}

double reference_dt(const ExperimentConfig& cfg, double finest) {
  const double dt = cfg.reference.dt > 0.0 ? cfg.reference.dt : finest / 64.0;
  if (dt > finest / 8.0 * (1.0 + 1e-12)) {
    throw ConfigError("reference dt must be <= 1/8 of the finest candidate dt");
  }
  return dt;
}

ObservedTrajectory reference_trajectory(const ExperimentConfig& cfg, double dt) {
  StepperSpec ref = cfg.reference;
  TimedRun r = timed_integrate(cfg, ref, dt, {1, 1}, 1);
  if (r.diverged) throw ConfigError("reference run diverged");
  auto problem = make_problem(cfg.problem, 1);
  return observe(*problem, r.trajectory);
}

ObservedTrajectory observe_run(const ExperimentConfig& cfg, const TimedRun& r) {
  auto problem = make_problem(cfg.problem, 1);
  return observe(*problem, r.trajectory);
}

}  // namespace

ObservedTrajectory observe(const SplitProblem& problem, const Trajectory& traj) {
  ObservedTrajectory out;
  out.times = traj.times;
  if (const auto* swe = dynamic_cast<const PlanarSWE*>(&problem)) {
    out.weight = swe->cell_area();
    for (const State& s : traj.states) {
      out.fields.push_back(swe->to_physical(swe->field(s, SweField::Vorticity)));
    }
  } else {
    for (const State& s : traj.states) out.fields.emplace_back(s.values().begin(), s.values().end());
  }
  return out;
}

double error_linf_l2(const ObservedTrajectory& a, const ObservedTrajectory& b, bool relative) {
  if (a.times.size() != b.times.size() || a.fields.size() != b.fields.size()) {
    throw ValidationError("trajectories have different checkpoint counts");
  }
  double err = 0.0, ref = 0.0;
  for (std::size_t c = 0; c < a.times.size(); ++c) {
    if (std::abs(a.times[c] - b.times[c]) > 1e-9 * std::max(1.0, std::abs(b.times[c]))) {
      throw ValidationError("checkpoint times do not match");
    }
    const auto& fa = a.fields[c];
    const auto& fb = b.fields[c];
    if (fa.size() != fb.size()) throw ValidationError("checkpoint field sizes do not match");
    double d2 = 0.0, r2 = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
      d2 += (fa[i] - fb[i]) * (fa[i] - fb[i]);
      r2 += fb[i] * fb[i];
    }
    err = std::max(err, std::sqrt(b.weight * d2));
    ref = std::max(ref, std::sqrt(b.weight * r2));
  }
  if (!relative) return err;
  if (ref == 0.0) throw ValidationError("relative error against an all-zero reference");
  return err / ref;
}

RunResult run(const ExperimentConfig& cfg, bool write) {
  cfg.validate();
  const double dt = cfg.stepper.dt;
  const std::size_t n_steps = steps_for(cfg.t_end, dt);
  auto problem = make_problem(cfg.problem, cfg.threads.space);
  const State u0 = make_initial_state(cfg.problem, *problem);
  auto stepper = make_stepper(cfg.stepper, cfg.threads.time);

  RunResult result;
  const auto t0 = Clock::now();
  result.trajectory = integrate(*problem, u0, dt, n_steps, *stepper, checkpoint_stride(cfg, dt));
  result.wall_s = std::chrono::duration<double>(Clock::now() - t0).count();
  const State& final_state = result.trajectory.states.back();
  result.final_hash = state_hash(final_state);
  if (!write) return result;

  const auto* swe = dynamic_cast<const PlanarSWE*>(problem.get());
  json steps = json::array();
  for (std::size_t i = 0; i < result.trajectory.steps.size(); ++i) {
    const StepReport& r = result.trajectory.steps[i];
    json row = counts_json(r.counts);
    row["step"] = i + 1;
    row["wall_s"] = r.wall_s;
    steps.push_back(row);
  }
  const StepReport& total = result.trajectory.total;
  json final_j{{"norm", final_state.norm()}, {"hash", hex(result.final_hash)}};
  if (swe) {
    final_j["mean_geopotential"] = swe->mean_geopotential(final_state);
    final_j["energy"] = swe->total_energy(final_state);
  }
  json report{{"problem", problem->name()},
              {"scheme", cfg.stepper.label()},
              {"dt", dt},
              {"T", cfg.t_end},
              {"n_steps", n_steps},
              {"dofs", problem->dofs()},
              {"space_threads", cfg.threads.space},
              {"time_threads", cfg.threads.time},
              {"wall_s", result.wall_s},
              {"stage_s", {{"init", total.init_s}, {"sweeps", total.sweeps_s}, {"last_node", total.last_node_s}}},
              {"counts", counts_json(total.counts)},
              {"steps", steps},
              {"final", final_j},
              {"environment", environment()}};
  open_output(cfg.out_dir, "run_report.json") << report.dump(2) << "\n";

  auto csv = open_output(cfg.out_dir, "checkpoints.csv");
  csv << "time,norm" << (swe ? ",mean_geopotential" : "") << "\n";
  for (std::size_t c = 0; c < result.trajectory.times.size(); ++c) {
    const State& s = result.trajectory.states[c];
    csv << result.trajectory.times[c] << "," << s.norm();
    if (swe) csv << "," << swe->mean_geopotential(s);
    csv << "\n";
  }
  if (swe && cfg.snapshots) {
    fs::create_directories(cfg.out_dir);
    write_snapshot((fs::path(cfg.out_dir) / "final_state.bin").string(), *swe, final_state, cfg.t_end);
    if (swe->n() <= 32) {
      open_output(cfg.out_dir, "final_state.json") << snapshot_to_json(*swe, final_state, cfg.t_end) << "\n";
    }
  }
  return result;
}

std::vector<WorkPrecisionPoint> work_precision(const ExperimentConfig& cfg, bool write) {
  cfg.validate();
  if (cfg.work_precision.empty()) throw ConfigError("work_precision section lists no schemes");
  double finest = std::numeric_limits<double>::infinity();
  for (const StepperSpec& s : cfg.work_precision) {
    if (s.dt_list.empty()) throw ConfigError("work_precision entry without dt_list");
    for (double dt : s.dt_list) finest = std::min(finest, dt);
  }
  const ObservedTrajectory reference = reference_trajectory(cfg, reference_dt(cfg, finest));
  const bool relative = cfg.metric == ErrorMetric::RelativeLinfL2;

  std::vector<WorkPrecisionPoint> points;
  for (const StepperSpec& spec : cfg.work_precision) {
    std::vector<double> dts = spec.dt_list;
    std::sort(dts.begin(), dts.end(), std::greater<>());
    for (double dt : dts) {
      WorkPrecisionPoint p{spec.label(), dt};
      TimedRun r = timed_integrate(cfg, spec, dt, cfg.threads, cfg.reps);
      if (r.diverged) {
        p.diverged = true;
        p.wall_s = std::numeric_limits<double>::quiet_NaN();
        p.error = std::numeric_limits<double>::quiet_NaN();
      } else {
        p.wall_s = r.wall_s;
        p.error = error_linf_l2(observe_run(cfg, r), reference, relative);
      }
      points.push_back(p);
    }
  }
  std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.scheme != b.scheme ? a.scheme < b.scheme : a.dt > b.dt;
  });

  if (write) {
    auto csv = open_output(cfg.out_dir, "work_precision.csv");
    csv << "scheme,dt,wall_s,error\n";
    json arr = json::array();
    for (const auto& p : points) {
      csv << p.scheme << "," << p.dt << ",";
      if (p.diverged) {
        csv << "diverged,diverged\n";
      } else {
        csv << p.wall_s << "," << p.error << "\n";
      }
      arr.push_back({{"scheme", p.scheme},
                     {"dt", p.dt},
                     {"wall_s", p.diverged ? json(nullptr) : json(p.wall_s)},
                     {"error", p.diverged ? json(nullptr) : json(p.error)},
                     {"status", p.diverged ? "diverged" : "ok"}});
    }
    json doc{{"metric", relative ? "rel" : "abs"}, {"points", arr}, {"environment", environment()}};
    open_output(cfg.out_dir, "work_precision.json") << doc.dump(2) << "\n";
  }
  return points;
}

std::vector<ScalingRow> strong_scaling(const ExperimentConfig& cfg, bool write) {
  cfg.validate();
  std::vector<ThreadSplit> splits = cfg.splits;
  const bool has_base = std::any_of(splits.begin(), splits.end(),
                                    [](const ThreadSplit& s) { return s.space == 1 && s.time == 1; });
  if (!has_base) splits.insert(splits.begin(), ThreadSplit{1, 1});
  const double dt = cfg.stepper.dt;
  const std::size_t n_steps = steps_for(cfg.t_end, dt);
  const unsigned budget = cfg.effective_core_budget();

  std::vector<ScalingRow> rows;
  for (const ThreadSplit& split : splits) {
    ScalingRow row{split};
    row.n_steps = n_steps;
    if (split.total() > budget || split.space < 1 || split.time < 1) {
      row.status = "skipped";
      std::fprintf(stderr, "warning: split (%u, %u) exceeds the core budget of %u; skipped\n",
                   split.space, split.time, budget);
      rows.push_back(row);
      continue;
    }
    TimedRun r = timed_integrate(cfg, cfg.stepper, dt, split, cfg.reps);
    if (r.diverged) throw DivergenceError("scaling run diverged", 0);
    auto problem = make_problem(cfg.problem, 1);
    row.wall_s = r.wall_s;
    row.time_per_dof = r.wall_s / (static_cast<double>(n_steps) * problem->dofs());
    rows.push_back(row);
  }

  if (write) {
    auto csv = open_output(cfg.out_dir, "scaling.csv");
    csv << "space_threads,time_threads,total_threads,wall_s,time_per_dof,status\n";
    json arr = json::array();
    for (const auto& r : rows) {
      csv << r.split.space << "," << r.split.time << "," << r.split.total() << "," << r.wall_s << ","
          << r.time_per_dof << "," << r.status << "\n";
      arr.push_back({{"space_threads", r.split.space},
                     {"time_threads", r.split.time},
                     {"wall_s", r.wall_s},
                     {"time_per_dof", r.time_per_dof},
                     {"n_steps", r.n_steps},
                     {"status", r.status}});
    }
    json doc{{"scheme", cfg.stepper.label()}, {"dt", dt}, {"rows", arr}, {"environment", environment()}};
    open_output(cfg.out_dir, "scaling.json") << doc.dump(2) << "\n";
  }
  return rows;
}

SpeedupTable speedup_report(const ExperimentConfig& cfg, bool write) {
  cfg.validate();
  if (!cfg.speedup_base) throw ConfigError("speedup section needs a base entry");
  double finest = cfg.speedup_base->stepper.dt;
  for (const auto& c : cfg.speedup_candidates) finest = std::min(finest, c.stepper.dt);
  const ObservedTrajectory reference = reference_trajectory(cfg, reference_dt(cfg, finest));
  const bool relative = cfg.metric == ErrorMetric::RelativeLinfL2;
  const unsigned budget = cfg.effective_core_budget();

  auto measure = [&](const SpeedupEntry& e) {
    if (e.threads.total() > budget) {
      throw ConfigError("speedup entry " + e.stepper.label() + " exceeds the core budget");
    }
    SpeedupRow row;
    row.entry = e;
    row.label = e.stepper.label() + "@" + std::to_string(e.threads.space) + "x" +
                std::to_string(e.threads.time);
    TimedRun r = timed_integrate(cfg, e.stepper, e.stepper.dt, e.threads, cfg.reps);
    if (r.diverged) {
      row.diverged = true;
      row.comparable = false;
      return row;
    }
    row.wall_s = r.wall_s;
    row.error = error_linf_l2(observe_run(cfg, r), reference, relative);
    return row;
  };

  SpeedupTable table;
  table.base = measure(*cfg.speedup_base);
  if (table.base.diverged) throw DivergenceError("speedup base configuration diverged", 0);
  table.base.speedup = 1.0;
  for (const auto& c : cfg.speedup_candidates) {
    SpeedupRow row = measure(c);
    if (!row.diverged) {
      row.speedup = table.base.wall_s / row.wall_s;
      const double hi = std::max(row.error, table.base.error);
      const double lo = std::min(row.error, table.base.error);
      row.comparable = hi <= 2.0 * lo;
    }
    table.rows.push_back(row);
  }
  const int m = cfg.stepper.num_nodes;
  table.s_theory = theoretical_speedup(m, 0.0);
  for (const auto& seq : table.rows) {
    if (seq.entry.stepper.scheme != "dsdc" || seq.entry.threads.time != 1 || seq.diverged) continue;
    for (const auto& par : table.rows) {
      if (par.entry.stepper.scheme == "dsdc" && par.entry.threads.time > 1 && !par.diverged &&
          par.entry.stepper.dt == seq.entry.stepper.dt &&
          par.entry.threads.space == seq.entry.threads.space) {
        table.s_measured = seq.wall_s / par.wall_s;
        break;
      }
    }
    if (table.s_measured) break;
  }

  if (write) {
    auto csv = open_output(cfg.out_dir, "speedup.csv");
    csv << "label,scheme,dt,space_threads,time_threads,wall_s,error,speedup,comparable\n";
    json arr = json::array();
    auto emit = [&](const SpeedupRow& r) {
      csv << r.label << "," << r.entry.stepper.label() << "," << r.entry.stepper.dt << ","
          << r.entry.threads.space << "," << r.entry.threads.time << ",";
      if (r.diverged) {
        csv << "diverged,diverged,diverged,false\n";
      } else {
        csv << r.wall_s << "," << r.error << "," << r.speedup << "," << (r.comparable ? "true" : "false")
            << "\n";
      }
      arr.push_back({{"label", r.label},
                     {"dt", r.entry.stepper.dt},
                     {"wall_s", r.diverged ? json(nullptr) : json(r.wall_s)},
                     {"error", r.diverged ? json(nullptr) : json(r.error)},
                     {"speedup", r.diverged ? json(nullptr) : json(r.speedup)},
                     {"comparable", r.comparable},
                     {"status", r.diverged ? "diverged" : "ok"}});
    };
    emit(table.base);
    for (const auto& r : table.rows) emit(r);
    json doc{{"base", table.base.label},
             {"rows", arr},
             {"perf_model", {{"S_theory", table.s_theory},
                             {"S_measured", table.s_measured ? json(*table.s_measured) : json(nullptr)}}},
             {"environment", environment()}};
    open_output(cfg.out_dir, "speedup.json") << doc.dump(2) << "\n";
  }
  return table;
}

PerfModelResult perf_model(const ExperimentConfig& cfg, bool write) {
  cfg.validate();
  if (cfg.stepper.scheme != "dsdc") throw ConfigError("perf-model needs a dsdc stepper");
  const int m = cfg.stepper.num_nodes;
  const int k = cfg.stepper.sweeps > 0 ? cfg.stepper.sweeps : m;
  const unsigned space = cfg.threads.space;
  const unsigned budget = cfg.effective_core_budget();
  const unsigned par_threads = cfg.threads.time > 1
                                   ? cfg.threads.time
                                   : std::max(1u, std::min<unsigned>(m, budget / space));
  const int samples = std::max(3, cfg.reps);

  auto problem = make_problem(cfg.problem, space);
  const State u0 = make_initial_state(cfg.problem, *problem);
  auto time_steps = [&](unsigned time_threads, std::vector<StepReport>& reports) {
    auto stepper = make_stepper(cfg.stepper, time_threads);
    State u = u0;
    stepper->step(*problem, u, cfg.stepper.dt);  // warm-up
    for (int i = 0; i < samples; ++i) reports.push_back(stepper->step(*problem, u, cfg.stepper.dt));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) best = std::min(best, r.wall_s);
    return best;
  };

  PerfModelResult res;
  std::vector<StepReport> seq_reports, par_reports;
  res.seq_step_s = time_steps(1, seq_reports);
  res.model = fit_costs(seq_reports, m, k);
  if (par_threads > 1) {
    res.par_step_s = time_steps(par_threads, par_reports);
    res.measured_speedup = res.seq_step_s / res.par_step_s;
  } else {
    res.par_step_s = std::numeric_limits<double>::quiet_NaN();
    res.measured_speedup = std::numeric_limits<double>::quiet_NaN();
  }
  if (write) {
    json doc = json::parse(perf_report_json(res.model, res.measured_speedup));
    doc["time_threads"] = par_threads;
    doc["space_threads"] = space;
    doc["seq_step_s"] = res.seq_step_s;
    doc["par_step_s"] = std::isnan(res.par_step_s) ? json(nullptr) : json(res.par_step_s);
    doc["environment"] = environment();
    open_output(cfg.out_dir, "perf_model.json") << doc.dump(2) << "\n";
  }
  return res;
}

}  // namespace psdc::bench
