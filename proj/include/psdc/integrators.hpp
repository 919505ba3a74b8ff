// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "psdc/collocation.hpp"
#include "psdc/problem.hpp"
#include "psdc/state.hpp"

namespace psdc {

class WorkerTeam;

enum class SdcMode {
  Serial,              ///< classic IMEX sweep, nodes updated one after another
  DiagonalSequential,  ///< diagonal sweep, nodes visited in order on one thread
  DiagonalParallel,    ///< diagonal sweep, nodes distributed over time threads
};

/// Weight of the explicit correction of node j in the classic sweep:
/// AsWritten uses dtau_{j+1} (forward-Euler step from node j to j+1),
/// Conventional uses dtau_j.
enum class DtauIndexing { AsWritten, Conventional };

struct SdcConfig {
  CollocationTable table = CollocationTable::radau_right(4);
  DiagonalPreconditioner precond{PreconditionerKind::MinSrFlex};
  int sweeps = 4;
  SdcMode mode = SdcMode::DiagonalSequential;
  unsigned time_threads = 1;
  DtauIndexing explicit_dtau = DtauIndexing::AsWritten;

  /// M Radau nodes, MIN-SR-FLEX, K = M sweeps.
  static SdcConfig with_nodes(int num_nodes, SdcMode mode = SdcMode::DiagonalSequential);
  void validate() const;
};

/// Timings (seconds, monotonic clock) and evaluation counts of one or more steps.
struct StepReport {
  double wall_s = 0.0;
  double init_s = 0.0;
  double sweeps_s = 0.0;
  double last_node_s = 0.0;
  EvalCounters counts;

  StepReport& operator+=(const StepReport& o);
};

/// One-step time integrator advancing a state in place.
class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual std::string name() const = 0;
  virtual StepReport step(const SplitProblem& problem, State& u, double dt) = 0;
  /// Drops any history carried between steps.
  virtual void reset() {}
};

/// Classic IMEX SDC: K sweeps with sequential node updates.
class SerialSdc final : public Stepper {
 public:
  explicit SerialSdc(SdcConfig cfg);
  std::string name() const override { return "sdc"; }
  StepReport step(const SplitProblem& problem, State& u, double dt) override;
  const SdcConfig& config() const noexcept { return cfg_; }

 private:
  SdcConfig cfg_;
};

/// Diagonal IMEX SDC. Sweeps 1..K-1 update all nodes independently, the final
/// sweep only the last node. Node storage is two vectors per node (implicit
/// tendency and fused tendency) plus one scratch vector per time thread.
class DiagonalSdc final : public Stepper {
 public:
  explicit DiagonalSdc(SdcConfig cfg);
  ~DiagonalSdc() override;

  std::string name() const override;
  StepReport step(const SplitProblem& problem, State& u, double dt) override;
  const SdcConfig& config() const noexcept { return cfg_; }
  /// Node-level vectors kept across sweeps (2 M).
  std::size_t retained_node_vectors() const noexcept { return implicit_.size() + fused_.size(); }

 private:
  template <typename Fn>
  void for_each_node(Fn&& fn);

  SdcConfig cfg_;
  std::unique_ptr<WorkerTeam> team_;
  std::vector<State> implicit_;  // f_I(u_m^k)
  std::vector<State> fused_;     // f_E(u_m^k) + f_I(u_m^k)
  std::vector<State> scratch_;   // one per time thread
};

/// Strang composition: half-step Crank-Nicolson on f_I, full Heun step on
/// f_E, half-step Crank-Nicolson on f_I.
class ImexO2 final : public Stepper {
 public:
  std::string name() const override { return "imex-o2"; }
  StepReport step(const SplitProblem& problem, State& u, double dt) override;
};

/// Semi-implicit Adams-Bashforth scheme with explicit weights (3/2 + 0.1,
/// -(1/2 + 0.1)) and an off-centred theta = 3/5 treatment of f_I. On the
/// planar SWE the gravity part is done as predictor / Helmholtz solve /
/// corrector; other problems use the equivalent theta-scheme solve. The first
/// step after reset() is an IMEX-o2 step.
class Ab2SemiImplicit final : public Stepper {
 public:
  static constexpr double kTheta = 0.6;
  static constexpr double kWeightCurrent = 1.5 + 0.1;
  static constexpr double kWeightPrevious = -(0.5 + 0.1);

  std::string name() const override { return "ab2-si"; }
  StepReport step(const SplitProblem& problem, State& u, double dt) override;
  void reset() override { previous_explicit_ = State(); }

 private:
  State previous_explicit_;
};

/// One AB2-SI update from (u_n, f_E(u_n), f_E(u_{n-1})); exposed for testing
/// the planar three-step form against the generic theta form.
State ab2_si_update(const SplitProblem& problem, const State& u_n, const State& explicit_n,
                    const State& explicit_prev, double dt, bool allow_three_step = true);

// Single-step entry points.
std::pair<State, StepReport> sdc_step_serial(const SplitProblem& problem, const State& u_n,
                                             double dt, const SdcConfig& cfg);
std::pair<State, StepReport> dsdc_step(const SplitProblem& problem, const State& u_n, double dt,
                                       const SdcConfig& cfg);
State imex_o2_step(const SplitProblem& problem, const State& u, double dt);
/// Throws BootstrapError when `u_prev` is empty.
State ab2_si_step(const SplitProblem& problem, const State& u_n, const State& u_prev, double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<StepReport> steps;
  StepReport total;
};

/// Advances `u0` by n_steps fixed steps of size dt. Records the initial state
/// and every `checkpoint_every`-th step (0: final state only; the final state
/// is always recorded). Throws DivergenceError with the 1-based step index as
/// soon as a state stops being finite.
Trajectory integrate(const SplitProblem& problem, const State& u0, double dt, std::size_t n_steps,
                     Stepper& stepper, std::size_t checkpoint_every = 0);

}  // namespace psdc
