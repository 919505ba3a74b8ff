// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "psdc/integrators.hpp"

#include <chrono>
#include <string>

#include "psdc/errors.hpp"
#include "psdc/planar_swe.hpp"
#include "psdc/worker_team.hpp"

namespace psdc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

[[noreturn]] void rethrow_with_context(const NumericalError& e, int node, int sweep) {
  throw NumericalError(std::string(e.what()) + " (node " + std::to_string(node + 1) + ", sweep " +
                           std::to_string(sweep) + ")",
                       e.component());
}

}  // namespace

SdcConfig SdcConfig::with_nodes(int num_nodes, SdcMode mode) {
  SdcConfig cfg;
  cfg.table = CollocationTable::radau_right(num_nodes);
  cfg.sweeps = num_nodes;
  cfg.mode = mode;
  return cfg;
}

void SdcConfig::validate() const {
  if (sweeps < 1) throw ParameterError("SDC needs at least one sweep");
  if (time_threads < 1) throw ParameterError("time_threads must be >= 1");
  if (time_threads > static_cast<unsigned>(table.num_nodes())) {
    throw ParameterError("time_threads must not exceed the node count");
  }
  if (mode != SdcMode::DiagonalParallel && time_threads != 1) {
    throw ParameterError("time_threads > 1 requires the parallel diagonal mode");
  }
  if (table.nodes().back() != 1.0) throw ParameterError("SDC requires a node at the step end");
}

StepReport& StepReport::operator+=(const StepReport& o) {
  wall_s += o.wall_s;
  init_s += o.init_s;
  sweeps_s += o.sweeps_s;
  last_node_s += o.last_node_s;
  counts += o.counts;
  return *this;
}

// ---------------------------------------------------------------------------
// Classic IMEX SDC

SerialSdc::SerialSdc(SdcConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.mode != SdcMode::Serial) throw ParameterError("SerialSdc requires SdcMode::Serial");
}

StepReport SerialSdc::step(const SplitProblem& problem, State& u, double dt) {
  const auto t0 = Clock::now();
  const EvalCounters c0 = problem.counters();
  const CollocationTable& table = cfg_.table;
  const int m_nodes = table.num_nodes();
  const auto dtau = table.dtau();
  StepReport report;

  SweepState s = initialize_sweep(problem, u, m_nodes);
  report.init_s = seconds_since(t0);
  const auto t_sweeps = Clock::now();

  std::vector<State> e_new(m_nodes, State(problem.size()));
  std::vector<State> i_new(m_nodes, State(problem.size()));
  State rhs(problem.size());
  for (int k = 0; k < cfg_.sweeps; ++k) {
    for (int m = 0; m < m_nodes; ++m) {
      rhs.assign(s.u0);
      for (int j = 0; j < m_nodes; ++j) {
        const double w = dt * table.q()(m, j);
        rhs.axpy(w, s.E[j]);
        rhs.axpy(w, s.I[j]);
      }
      for (int j = 0; j < m; ++j) {
        const double we =
            dt * (cfg_.explicit_dtau == DtauIndexing::AsWritten ? dtau[j + 1] : dtau[j]);
        rhs.axpy(we, e_new[j]);
        rhs.axpy(-we, s.E[j]);
        rhs.axpy(dt * dtau[j], i_new[j]);
        rhs.axpy(-dt * dtau[j], s.I[j]);
      }
      rhs.axpy(-dt * dtau[m], s.I[m]);
      try {
        problem.solve_implicit(dt * dtau[m], rhs, s.u[m], s.u[m]);
      } catch (const NumericalError& e) {
        rethrow_with_context(e, m, k + 1);
      }
      problem.eval_explicit(s.u[m], e_new[m]);
      problem.eval_implicit(s.u[m], i_new[m]);
    }
    std::swap(s.E, e_new);
    std::swap(s.I, i_new);
  }
  report.sweeps_s = seconds_since(t_sweeps);
  u.assign(s.u[m_nodes - 1]);
  report.wall_s = seconds_since(t0);
  report.counts = problem.counters() - c0;
  return report;
}

// ---------------------------------------------------------------------------
// Diagonal IMEX SDC

DiagonalSdc::DiagonalSdc(SdcConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.mode == SdcMode::Serial) throw ParameterError("DiagonalSdc requires a diagonal mode");
  if (cfg_.mode == SdcMode::DiagonalParallel) team_ = std::make_unique<WorkerTeam>(cfg_.time_threads);
}

DiagonalSdc::~DiagonalSdc() = default;

std::string DiagonalSdc::name() const {
  return cfg_.mode == SdcMode::DiagonalParallel ? "dsdc-pint" : "dsdc";
}

// Node m always runs on worker m mod T, so placement is reproducible.
template <typename Fn>
void DiagonalSdc::for_each_node(Fn&& fn) {
  const int m_nodes = cfg_.table.num_nodes();
  if (!team_) {
    for (int m = 0; m < m_nodes; ++m) fn(m, 0u);
    return;
  }
  const unsigned workers = team_->size();
  team_->run([&](unsigned w) {
    for (int m = static_cast<int>(w); m < m_nodes; m += static_cast<int>(workers)) fn(m, w);
  });
}

StepReport DiagonalSdc::step(const SplitProblem& problem, State& u, double dt) {
  const auto t0 = Clock::now();
  const EvalCounters c0 = problem.counters();
  const CollocationTable& table = cfg_.table;
  const int m_nodes = table.num_nodes();
  const int last = m_nodes - 1;
  StepReport report;

  u.require_finite();
  const std::size_t n = problem.size();
  if (implicit_.size() != static_cast<std::size_t>(m_nodes) || implicit_[0].size() != n) {
    implicit_.assign(m_nodes, State(n));
    fused_.assign(m_nodes, State(n));
    scratch_.assign(cfg_.time_threads, State(n));
  }

  // Sweep initialization: one f_E and one f_I evaluation, copied to all nodes.
  problem.eval_explicit(u, fused_[0]);
  problem.eval_implicit(u, implicit_[0]);
  fused_[0].add(implicit_[0]);
  for (int m = 1; m < m_nodes; ++m) {
    implicit_[m].assign(implicit_[0]);
    fused_[m].assign(fused_[0]);
  }
  report.init_s = seconds_since(t0);

  // rhs_m = u_n + dt sum_j q_mj F_j - dt d_m I_m, built in the I_m slot.
  auto build_rhs = [&](int m, double diag, State& slot) {
    slot.scale(-dt * diag);
    slot.add(u);
    for (int j = 0; j < m_nodes; ++j) slot.axpy(dt * table.q()(m, j), fused_[j]);
  };

  const auto t_sweeps = Clock::now();
  for (int k = 1; k < cfg_.sweeps; ++k) {
    // Phase 1 reads every fused tendency, so all right-hand sides and solves
    // complete before phase 2 overwrites them.
    for_each_node([&](int m, unsigned) {
      const double diag = cfg_.precond.coefficient(table, m, k);
      build_rhs(m, diag, implicit_[m]);
      try {
        problem.solve_implicit(dt * diag, implicit_[m], implicit_[m], implicit_[m]);
      } catch (const NumericalError& e) {
        rethrow_with_context(e, m, k);
      }
    });
    for_each_node([&](int m, unsigned w) {
      State& node_u = implicit_[m];
      State& tmp = scratch_[w];
      problem.eval_explicit(node_u, fused_[m]);
      problem.eval_implicit(node_u, tmp);
      fused_[m].add(tmp);
      node_u.swap(tmp);
    });
  }
  report.sweeps_s = seconds_since(t_sweeps);

  // Final sweep: only the last node matters and its tendencies are not needed.
  const auto t_last = Clock::now();
  const double diag = cfg_.precond.coefficient(table, last, cfg_.sweeps);
  build_rhs(last, diag, implicit_[last]);
  try {
    problem.solve_implicit(dt * diag, implicit_[last], implicit_[last], u);
  } catch (const NumericalError& e) {
    rethrow_with_context(e, last, cfg_.sweeps);
  }
  report.last_node_s = seconds_since(t_last);
  report.wall_s = seconds_since(t0);
  report.counts = problem.counters() - c0;
  return report;
}

// ---------------------------------------------------------------------------
// IMEX-o2

StepReport ImexO2::step(const SplitProblem& problem, State& u, double dt) {
  const auto t0 = Clock::now();
  const EvalCounters c0 = problem.counters();
  const double alpha = dt / 4.0;
  State tmp(problem.size());

  auto crank_nicolson_half = [&] {
    problem.eval_implicit(u, tmp);
    tmp.scale(alpha);
    tmp.add(u);
    problem.solve_implicit(alpha, tmp, u, u);
  };

  crank_nicolson_half();
  State k1(problem.size()), k2(problem.size());
  problem.eval_explicit(u, k1);
  tmp.assign(u);
  tmp.axpy(dt, k1);
  problem.eval_explicit(tmp, k2);
  u.axpy(0.5 * dt, k1);
  u.axpy(0.5 * dt, k2);
  crank_nicolson_half();

  StepReport report;
  report.wall_s = report.sweeps_s = seconds_since(t0);
  report.counts = problem.counters() - c0;
  return report;
}

// ---------------------------------------------------------------------------
// AB2 semi-implicit

namespace {

void ab2_three_step_swe(const PlanarSWE& swe, const State& u_n, const State& e_n,
                        const State& e_prev, double dt, State& out) {
  constexpr double theta = Ab2SemiImplicit::kTheta;
  constexpr double w_now = Ab2SemiImplicit::kWeightCurrent;
  constexpr double w_old = Ab2SemiImplicit::kWeightPrevious;
  const double phi_bar = swe.params().phi_bar;
  const int n = swe.n(), h = swe.half();
  const auto phi = swe.field(u_n, SweField::Geopotential);
  const auto zeta = swe.field(u_n, SweField::Vorticity);
  const auto delta = swe.field(u_n, SweField::Divergence);
  auto phi_new = swe.field(out, SweField::Geopotential);
  auto zeta_new = swe.field(out, SweField::Vorticity);
  auto delta_new = swe.field(out, SweField::Divergence);
  const auto en_phi = swe.field(e_n, SweField::Geopotential);
  const auto en_zeta = swe.field(e_n, SweField::Vorticity);
  const auto en_delta = swe.field(e_n, SweField::Divergence);
  const auto ep_phi = swe.field(e_prev, SweField::Geopotential);
  const auto ep_zeta = swe.field(e_prev, SweField::Vorticity);
  const auto ep_delta = swe.field(e_prev, SweField::Divergence);

  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < h; ++ix) {
      const std::size_t idx = static_cast<std::size_t>(iy) * h + ix;
      const double k2 = swe.laplacian_symbol(iy, ix);
      // Predictor: explicit share of the gravity term plus extrapolated f_E.
      const auto zeta_bar = zeta[idx] + dt * (w_now * en_zeta[idx] + w_old * ep_zeta[idx]);
      const auto delta_bar = delta[idx] + dt * (1.0 - theta) * k2 * phi[idx] +
                             dt * (w_now * en_delta[idx] + w_old * ep_delta[idx]);
      // Helmholtz problem for the new geopotential.
      const double c = theta * dt;
      const auto rhs = phi[idx] - dt * phi_bar * (theta * delta_bar + (1.0 - theta) * delta[idx]) +
                       dt * (w_now * en_phi[idx] + w_old * ep_phi[idx]);
      const auto p = rhs / (1.0 + c * c * phi_bar * k2);
      // Corrector with the implicit share of the new gravity term.
      phi_new[idx] = p;
      delta_new[idx] = delta_bar + c * k2 * p;
      zeta_new[idx] = zeta_bar;
    }
  }
}

}  // namespace

State ab2_si_update(const SplitProblem& problem, const State& u_n, const State& explicit_n,
                    const State& explicit_prev, double dt, bool allow_three_step) {
  State out(problem.size());
  if (const auto* swe = dynamic_cast<const PlanarSWE*>(&problem); swe && allow_three_step) {
    ab2_three_step_swe(*swe, u_n, explicit_n, explicit_prev, dt, out);
    return out;
  }
  constexpr double theta = Ab2SemiImplicit::kTheta;
  State rhs(problem.size());
  problem.eval_implicit(u_n, rhs);
  rhs.scale((1.0 - theta) * dt);
  rhs.add(u_n);
  rhs.axpy(dt * Ab2SemiImplicit::kWeightCurrent, explicit_n);
  rhs.axpy(dt * Ab2SemiImplicit::kWeightPrevious, explicit_prev);
  problem.solve_implicit(theta * dt, rhs, u_n, out);
  return out;
}

StepReport Ab2SemiImplicit::step(const SplitProblem& problem, State& u, double dt) {
  const auto t0 = Clock::now();
  const EvalCounters c0 = problem.counters();
  StepReport report;
  State explicit_now = problem.f_explicit(u);
  if (previous_explicit_.size() != problem.size()) {
    ImexO2 bootstrap;
    bootstrap.step(problem, u, dt);
  } else {
    u = ab2_si_update(problem, u, explicit_now, previous_explicit_, dt);
  }
  previous_explicit_ = std::move(explicit_now);
  report.wall_s = report.sweeps_s = seconds_since(t0);
  report.counts = problem.counters() - c0;
  return report;
}

// ---------------------------------------------------------------------------
// Single-step entry points

std::pair<State, StepReport> sdc_step_serial(const SplitProblem& problem, const State& u_n,
                                             double dt, const SdcConfig& cfg) {
  SerialSdc stepper(cfg);
  State u = u_n;
  StepReport r = stepper.step(problem, u, dt);
  return {std::move(u), r};
}

std::pair<State, StepReport> dsdc_step(const SplitProblem& problem, const State& u_n, double dt,
                                       const SdcConfig& cfg) {
  DiagonalSdc stepper(cfg);
  State u = u_n;
  StepReport r = stepper.step(problem, u, dt);
  return {std::move(u), r};
}

State imex_o2_step(const SplitProblem& problem, const State& u, double dt) {
  State out = u;
  ImexO2().step(problem, out, dt);
  return out;
}

State ab2_si_step(const SplitProblem& problem, const State& u_n, const State& u_prev, double dt) {
  if (u_prev.size() != problem.size()) {
    throw BootstrapError("AB2-SI needs the previous state; bootstrap the first step");
  }
  return ab2_si_update(problem, u_n, problem.f_explicit(u_n), problem.f_explicit(u_prev), dt);
}

// ---------------------------------------------------------------------------

Trajectory integrate(const SplitProblem& problem, const State& u0, double dt, std::size_t n_steps,
                     Stepper& stepper, std::size_t checkpoint_every) {
  if (n_steps < 1) throw ParameterError("integrate needs n_steps >= 1");
  if (!(dt > 0.0)) throw ParameterError("time step must be positive");
  if (u0.size() != problem.size()) throw ValidationError("initial state size does not match problem");
  u0.require_finite();
  stepper.reset();
  Trajectory traj;
  traj.steps.reserve(n_steps);
  State u = u0;
  if (checkpoint_every > 0) {
    traj.times.push_back(0.0);
    traj.states.push_back(u);
  }
  for (std::size_t step = 1; step <= n_steps; ++step) {
    StepReport r;
    try {
      r = stepper.step(problem, u, dt);
    } catch (const NumericalError&) {
      throw DivergenceError("solution diverged at step " + std::to_string(step), step);
    }
    if (u.first_nonfinite()) {
      throw DivergenceError("solution diverged at step " + std::to_string(step), step);
    }
    traj.steps.push_back(r);
    traj.total += r;
    const bool at_checkpoint = checkpoint_every > 0 && step % checkpoint_every == 0;
    if (at_checkpoint || step == n_steps) {
      traj.times.push_back(static_cast<double>(step) * dt);
      traj.states.push_back(u);
    }
  }
  return traj;
}

}  // namespace psdc
