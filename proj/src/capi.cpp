// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "psdc/bench.hpp"
#include "psdc/collocation.hpp"
#include "psdc/dahlquist.hpp"
#include "psdc/errors.hpp"
#include "psdc/integrators.hpp"
#include "psdc/perfmodel.hpp"
#include "psdc/planar_swe.hpp"
#include "psdc/psdc.h"
#include "psdc/snapshot.hpp"

struct psdc_problem {
  std::unique_ptr<psdc::SplitProblem> impl;
};

struct psdc_stepper {
  std::unique_ptr<psdc::Stepper> impl;
};

namespace {

thread_local std::string g_last_error;
thread_local std::size_t g_failed_step = 0;

psdc_status fail(psdc_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
psdc_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return PSDC_OK;
  } catch (const psdc::DivergenceError& e) {
    g_failed_step = e.step();
    return fail(PSDC_ERR_DIVERGENCE, e.what());
  } catch (const psdc::ConfigError& e) {
    return fail(PSDC_ERR_CONFIG, e.what());
  } catch (const psdc::ParameterError& e) {
    return fail(PSDC_ERR_PARAMETER, e.what());
  } catch (const psdc::NumericalError& e) {
    return fail(PSDC_ERR_NUMERICAL, e.what());
  } catch (const psdc::ValidationError& e) {
    return fail(PSDC_ERR_VALIDATION, e.what());
  } catch (const psdc::BootstrapError& e) {
    return fail(PSDC_ERR_BOOTSTRAP, e.what());
  } catch (const psdc::FitError& e) {
    return fail(PSDC_ERR_NUMERICAL, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(PSDC_ERR_IO, e.what());
  } catch (const psdc::Error& e) {
    return fail(PSDC_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PSDC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PSDC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PSDC_ERR_INTERNAL, "unknown error");
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw psdc::ParameterError(what);
}

psdc::SweParams to_cpp(const psdc_swe_params& p) {
  psdc::SweParams s;
  s.n = p.n;
  s.length = p.length;
  s.phi_bar = p.phi_bar;
  s.f0 = p.f0;
  s.nu = p.nu;
  s.dealias = p.dealias != 0;
  s.space_threads = p.space_threads;
  return s;
}

psdc_swe_params to_c(const psdc::SweParams& s) {
  return {s.n, s.length, s.phi_bar, s.f0, s.nu, s.dealias ? 1 : 0, s.space_threads};
}

psdc_counters to_c(const psdc::EvalCounters& c) { return {c.n_explicit, c.n_implicit, c.n_solve}; }

const psdc::PlanarSWE& as_swe(const psdc_problem* problem) {
  require(problem != nullptr, "null problem");
  const auto* swe = dynamic_cast<const psdc::PlanarSWE*>(problem->impl.get());
  if (!swe) throw psdc::ParameterError("problem is not a planar SWE problem");
  return *swe;
}

void print_summary(const std::string& command, const psdc::bench::ExperimentConfig& cfg) {
  std::printf("%s: results written to %s\n", command.c_str(), cfg.out_dir.c_str());
}

}  // namespace

extern "C" {

const char* psdc_last_error(void) { return g_last_error.c_str(); }

void psdc_swe_params_default(psdc_swe_params* out) {
  if (out) *out = to_c(psdc::SweParams{});
}

void psdc_jet_params_default(psdc_jet_params* out, double length) {
  if (!out) return;
  psdc::JetConfig j;
  *out = {j.u0, 0.5 * length, 0.05 * length, j.epsilon, j.k_pert};
}

void psdc_stepper_params_default(psdc_stepper_params* out) {
  if (out) *out = {PSDC_SCHEME_DSDC, 4, 0, 0, 0, 1};
}

psdc_status psdc_dahlquist_create(double li_re, double li_im, double le_re, double le_im,
                                  size_t width, psdc_problem** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    auto p = std::make_unique<psdc_problem>();
    p->impl = std::make_unique<psdc::DahlquistProblem>(std::complex<double>(li_re, li_im),
                                                       std::complex<double>(le_re, le_im), width);
    *out = p.release();
  });
}

psdc_status psdc_swe_create(const psdc_swe_params* params, psdc_problem** out) {
  return guarded([&] {
    require(params != nullptr && out != nullptr, "null argument");
    auto p = std::make_unique<psdc_problem>();
    p->impl = std::make_unique<psdc::PlanarSWE>(to_cpp(*params));
    *out = p.release();
  });
}

void psdc_problem_destroy(psdc_problem* problem) { delete problem; }

size_t psdc_problem_size(const psdc_problem* problem) {
  return problem ? problem->impl->size() : 0;
}

psdc_status psdc_problem_counters(const psdc_problem* problem, psdc_counters* out) {
  return guarded([&] {
    require(problem != nullptr && out != nullptr, "null argument");
    *out = to_c(problem->impl->counters());
  });
}

void psdc_problem_reset_counters(psdc_problem* problem) {
  if (problem) problem->impl->reset_counters();
}

psdc_status psdc_swe_jet_state(const psdc_problem* problem, const psdc_jet_params* jet,
                               double* state) {
  return guarded([&] {
    require(jet != nullptr && state != nullptr, "null argument");
    const psdc::PlanarSWE& swe = as_swe(problem);
    psdc::JetConfig cfg;
    cfg.u0 = jet->u0;
    cfg.y0 = jet->y0;
    cfg.width = jet->width;
    cfg.epsilon = jet->epsilon;
    cfg.k_pert = jet->k_pert;
    const psdc::State s = swe.jet_initial_condition(cfg);
    std::copy(s.values().begin(), s.values().end(), state);
  });
}

psdc_status psdc_stepper_create(const psdc_stepper_params* params, psdc_stepper** out) {
  return guarded([&] {
    require(params != nullptr && out != nullptr, "null argument");
    psdc::bench::StepperSpec spec;
    switch (params->scheme) {
      case PSDC_SCHEME_SDC: spec.scheme = "sdc"; break;
      case PSDC_SCHEME_DSDC: spec.scheme = "dsdc"; break;
      case PSDC_SCHEME_IMEX_O2: spec.scheme = "imex-o2"; break;
      case PSDC_SCHEME_AB2_SI: spec.scheme = "ab2-si"; break;
      default: throw psdc::ParameterError("unknown scheme");
    }
    spec.num_nodes = params->num_nodes;
    spec.sweeps = params->sweeps;
    spec.precond = params->implicit_euler_precond ? psdc::PreconditionerKind::ImplicitEulerDeltaTau
                                                  : psdc::PreconditionerKind::MinSrFlex;
    spec.explicit_dtau = params->conventional_dtau ? psdc::DtauIndexing::Conventional
                                                   : psdc::DtauIndexing::AsWritten;
    auto s = std::make_unique<psdc_stepper>();
    try {
      s->impl = psdc::bench::make_stepper(spec, std::max(1u, params->time_threads));
    } catch (const psdc::ConfigError& e) {
      throw psdc::ParameterError(e.what());
    }
    *out = s.release();
  });
}

void psdc_stepper_destroy(psdc_stepper* stepper) { delete stepper; }

psdc_status psdc_stepper_step(psdc_stepper* stepper, const psdc_problem* problem, double* state,
                              double dt, psdc_step_report* report) {
  return guarded([&] {
    require(stepper != nullptr && problem != nullptr && state != nullptr, "null argument");
    const std::size_t n = problem->impl->size();
    psdc::State u(std::vector<double>(state, state + n));
    const psdc::StepReport r = stepper->impl->step(*problem->impl, u, dt);
    std::copy(u.values().begin(), u.values().end(), state);
    if (report) *report = {r.wall_s, r.init_s, r.sweeps_s, r.last_node_s, to_c(r.counts)};
  });
}

psdc_status psdc_stepper_reset(psdc_stepper* stepper) {
  return guarded([&] {
    require(stepper != nullptr, "null stepper");
    stepper->impl->reset();
  });
}

psdc_status psdc_integrate(psdc_stepper* stepper, const psdc_problem* problem, double* state,
                           double dt, size_t n_steps, size_t* failed_step) {
  g_failed_step = 0;
  const psdc_status st = guarded([&] {
    require(stepper != nullptr && problem != nullptr && state != nullptr, "null argument");
    const std::size_t n = problem->impl->size();
    const psdc::State u0(std::vector<double>(state, state + n));
    const psdc::Trajectory t = psdc::integrate(*problem->impl, u0, dt, n_steps, *stepper->impl);
    std::copy(t.states.back().values().begin(), t.states.back().values().end(), state);
  });
  if (failed_step) *failed_step = g_failed_step;
  return st;
}

psdc_status psdc_radau_right_nodes(int num_nodes, double* nodes) {
  return guarded([&] {
    require(nodes != nullptr, "null output");
    const auto t = psdc::radau_right_nodes(num_nodes);
    std::copy(t.begin(), t.end(), nodes);
  });
}

psdc_status psdc_quadrature_matrix(int num_nodes, double* q) {
  return guarded([&] {
    require(q != nullptr, "null output");
    const auto nodes = psdc::radau_right_nodes(num_nodes);
    const auto mat = psdc::quadrature_matrix(nodes);
    for (int r = 0; r < num_nodes; ++r) {
      for (int c = 0; c < num_nodes; ++c) q[r * num_nodes + c] = mat(r, c);
    }
  });
}

psdc_status psdc_perf_step_costs(int num_nodes, int sweeps, double c_explicit, double c_solve,
                                 double c_extra, double* sequential, double* parallel) {
  return guarded([&] {
    require(sequential != nullptr && parallel != nullptr, "null output");
    const psdc::PerfModel m{num_nodes, sweeps, c_explicit, c_solve, c_extra};
    const psdc::StepCosts c = psdc::step_costs(m);
    *sequential = c.sequential;
    *parallel = c.parallel;
  });
}

psdc_status psdc_theoretical_speedup(int num_nodes, double ratio, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = psdc::theoretical_speedup(num_nodes, ratio);
  });
}

psdc_status psdc_snapshot_write(const char* path, const psdc_problem* problem, const double* state,
                                double time) {
  return guarded([&] {
    require(path != nullptr && state != nullptr, "null argument");
    const psdc::PlanarSWE& swe = as_swe(problem);
    const psdc::State s(std::vector<double>(state, state + swe.size()));
    psdc::write_snapshot(path, swe, s, time);
  });
}

psdc_status psdc_snapshot_read(const char* path, psdc_swe_params* params, double* time,
                               double* state, size_t* size) {
  return guarded([&] {
    require(path != nullptr && size != nullptr, "null argument");
    const psdc::Snapshot snap = psdc::read_snapshot(path);
    if (params) *params = to_c(snap.params);
    if (time) *time = snap.time;
    if (state) {
      if (*size < snap.state.size()) throw psdc::ParameterError("state buffer too small");
      std::copy(snap.state.values().begin(), snap.state.values().end(), state);
    }
    *size = snap.state.size();
  });
}

psdc_status psdc_bench_execute(const char* command, const char* config_path,
                               const psdc_bench_options* options) {
  return guarded([&] {
    if (!command || !config_path) throw psdc::ConfigError("missing command or config path");
    psdc::bench::ExperimentConfig cfg = psdc::bench::load_config(config_path);
    if (options) {
      if (options->out_dir) cfg.out_dir = options->out_dir;
      if (options->space_threads > 0) cfg.threads.space = options->space_threads;
      if (options->time_threads > 0) cfg.threads.time = options->time_threads;
      if (options->reps > 0) cfg.reps = options->reps;
      if (options->metric) {
        const std::string m = options->metric;
        if (m == "rel") {
          cfg.metric = psdc::bench::ErrorMetric::RelativeLinfL2;
        } else if (m == "abs") {
          cfg.metric = psdc::bench::ErrorMetric::AbsoluteLinfL2;
        } else {
          throw psdc::ConfigError("metric must be rel or abs");
        }
      }
    }
    const std::string cmd = command;
    if (cmd == "run") {
      const auto r = psdc::bench::run(cfg);
      std::printf("run: %zu steps in %.6f s\n", r.trajectory.steps.size(), r.wall_s);
    } else if (cmd == "work-precision") {
      for (const auto& p : psdc::bench::work_precision(cfg)) {
        if (p.diverged) {
          std::printf("%-16s dt=%-10g diverged\n", p.scheme.c_str(), p.dt);
        } else {
          std::printf("%-16s dt=%-10g wall=%.4e error=%.4e\n", p.scheme.c_str(), p.dt, p.wall_s, p.error);
        }
      }
    } else if (cmd == "scaling") {
      for (const auto& r : psdc::bench::strong_scaling(cfg)) {
        std::printf("space=%u time=%u wall=%.4e status=%s\n", r.split.space, r.split.time, r.wall_s,
                    r.status.c_str());
      }
    } else if (cmd == "speedup") {
      const auto t = psdc::bench::speedup_report(cfg);
      for (const auto& r : t.rows) {
        std::printf("%-24s speedup=%.3f comparable=%s\n", r.label.c_str(), r.speedup,
                    r.comparable ? "yes" : "no");
      }
    } else if (cmd == "perf-model") {
      const auto r = psdc::bench::perf_model(cfg);
      std::printf("c_E=%.4e c_S=%.4e measured speedup=%.3f\n", r.model.c_explicit, r.model.c_solve,
                  r.measured_speedup);
    } else {
      throw psdc::ConfigError("unknown command " + cmd);
    }
    print_summary(cmd, cfg);
  });
}

}  // extern "C"
