// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "psdc/bench.hpp"
#include "psdc/dahlquist.hpp"
#include "psdc/errors.hpp"

namespace psdc::bench {

using nlohmann::json;

namespace {

std::complex<double> parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("expected a number or a [re, im] pair");
}

PreconditionerKind parse_precond(const std::string& s) {
  if (s == "min-sr-flex") return PreconditionerKind::MinSrFlex;
  if (s == "implicit-euler") return PreconditionerKind::ImplicitEulerDeltaTau;
  throw ConfigError("unknown preconditioner '" + s + "'");
}

DtauIndexing parse_indexing(const std::string& s) {
  if (s == "as-written") return DtauIndexing::AsWritten;
  if (s == "conventional") return DtauIndexing::Conventional;
  throw ConfigError("unknown explicit_dtau indexing '" + s + "'");
}

StepperSpec parse_stepper(const json& j, const StepperSpec& defaults = {}) {
  StepperSpec s = defaults;
  s.scheme = j.value("scheme", s.scheme);
  s.num_nodes = j.value("M", s.num_nodes);
  s.sweeps = j.value("K", s.sweeps);
  if (j.contains("preconditioner")) s.precond = parse_precond(j["preconditioner"].get<std::string>());
  if (j.contains("explicit_dtau")) s.explicit_dtau = parse_indexing(j["explicit_dtau"].get<std::string>());
  s.dt = j.value("dt", s.dt);
  if (j.contains("dt_list")) s.dt_list = j["dt_list"].get<std::vector<double>>();
  static const char* schemes[] = {"sdc", "dsdc", "imex-o2", "ab2-si"};
  if (std::find(std::begin(schemes), std::end(schemes), s.scheme) == std::end(schemes)) {
    throw ConfigError("unknown scheme '" + s.scheme + "'");
  }
  return s;
}

ThreadSplit parse_split(const json& j) {
  if (j.is_array() && j.size() == 2) return {j[0].get<unsigned>(), j[1].get<unsigned>()};
  return {j.value("space", 1u), j.value("time", 1u)};
}

SpeedupEntry parse_speedup_entry(const json& j) {
  return {parse_stepper(j), {j.value("space", 1u), j.value("time", 1u)}};
}

ProblemSpec parse_problem(const json& j) {
  ProblemSpec p;
  const std::string type = j.value("type", "dahlquist");
  if (type == "dahlquist") {
    p.kind = ProblemSpec::Kind::Dahlquist;
    if (j.contains("lambda_I")) p.lambda_implicit = parse_complex(j["lambda_I"]);
    if (j.contains("lambda_E")) p.lambda_explicit = parse_complex(j["lambda_E"]);
    if (j.contains("u0")) p.initial = parse_complex(j["u0"]);
    p.width = j.value("width", p.width);
  } else if (type == "swe") {
    p.kind = ProblemSpec::Kind::PlanarSwe;
    p.swe.n = j.value("N", p.swe.n);
    p.swe.length = j.value("L", p.swe.length);
    p.swe.phi_bar = j.value("phi_bar", p.swe.phi_bar);
    p.swe.f0 = j.value("f0", p.swe.f0);
    p.swe.nu = j.value("nu", p.swe.nu);
    p.swe.dealias = j.value("dealias", p.swe.dealias);
    p.jet.y0 = 0.5 * p.swe.length;
    p.jet.width = 0.05 * p.swe.length;
    if (j.contains("jet")) {
      const json& jet = j["jet"];
      p.jet.u0 = jet.value("U0", p.jet.u0);
      p.jet.y0 = jet.value("y0", p.jet.y0);
      p.jet.width = jet.value("L_jet", p.jet.width);
      p.jet.epsilon = jet.value("epsilon", p.jet.epsilon);
      p.jet.k_pert = jet.value("k_pert", p.jet.k_pert);
    }
  } else {
    throw ConfigError("unknown problem type '" + type + "'");
  }
  return p;
}

}  // namespace

std::string StepperSpec::label() const {
  if (scheme == "sdc" || scheme == "dsdc") {
    const int k = sweeps > 0 ? sweeps : num_nodes;
    return scheme + "-M" + std::to_string(num_nodes) + "K" + std::to_string(k);
  }
  return scheme;
}

unsigned ExperimentConfig::effective_core_budget() const {
  if (core_budget > 0) return core_budget;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t steps_for(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw ConfigError("T and dt must be positive");
  const double ratio = t_end / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw ConfigError("dt = " + std::to_string(dt) + " does not divide T = " + std::to_string(t_end));
  }
  return static_cast<std::size_t>(rounded);
}

void ExperimentConfig::validate() const {
  if (threads.space < 1 || threads.time < 1) throw ConfigError("thread counts must be >= 1");
  if (threads.total() > effective_core_budget()) {
    throw ConfigError("space_threads * time_threads exceeds the core budget of " +
                      std::to_string(effective_core_budget()));
  }
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (!(t_end > 0.0)) throw ConfigError("run.T must be positive");
  if (checkpoint_interval < 0.0) throw ConfigError("checkpoint_interval must be >= 0");
  if (problem.kind == ProblemSpec::Kind::PlanarSwe) {
    try {
      problem.jet.validate(problem.swe.length);
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  ExperimentConfig cfg;
  try {
    const json j = json::parse(json_text);
    if (j.contains("problem")) cfg.problem = parse_problem(j["problem"]);
    if (j.contains("stepper")) cfg.stepper = parse_stepper(j["stepper"]);
    if (j.contains("threads")) {
      const json& t = j["threads"];
      cfg.threads = {t.value("space", 1u), t.value("time", 1u)};
      cfg.core_budget = t.value("core_budget", 0u);
    }
    if (j.contains("run")) {
      const json& r = j["run"];
      cfg.t_end = r.value("T", cfg.t_end);
      cfg.checkpoint_interval = r.value("checkpoint_interval", cfg.checkpoint_interval);
      cfg.reps = r.value("reps", cfg.reps);
      cfg.snapshots = r.value("snapshots", cfg.snapshots);
    }
    if (j.contains("metric")) {
      const std::string m = j["metric"].get<std::string>();
      if (m == "rel") cfg.metric = ErrorMetric::RelativeLinfL2;
      else if (m == "abs") cfg.metric = ErrorMetric::AbsoluteLinfL2;
      else throw ConfigError("metric must be 'rel' or 'abs'");
    }
    if (j.contains("reference")) cfg.reference = parse_stepper(j["reference"], cfg.reference);
    if (j.contains("work_precision")) {
      for (const json& s : j["work_precision"]) cfg.work_precision.push_back(parse_stepper(s));
    }
    if (j.contains("scaling")) {
      for (const json& s : j["scaling"].value("splits", json::array())) cfg.splits.push_back(parse_split(s));
    }
    if (j.contains("speedup")) {
      const json& s = j["speedup"];
      if (s.contains("base")) cfg.speedup_base = parse_speedup_entry(s["base"]);
      for (const json& c : s.value("candidates", json::array())) {
        cfg.speedup_candidates.push_back(parse_speedup_entry(c));
      }
    }
    if (j.contains("output")) cfg.out_dir = j["output"].value("dir", cfg.out_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::unique_ptr<SplitProblem> make_problem(const ProblemSpec& spec, unsigned space_threads) {
  try {
    if (spec.kind == ProblemSpec::Kind::Dahlquist) {
      return std::make_unique<DahlquistProblem>(spec.lambda_implicit, spec.lambda_explicit, spec.width);
    }
    SweParams p = spec.swe;
    p.space_threads = space_threads;
    return std::make_unique<PlanarSWE>(p);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

State make_initial_state(const ProblemSpec& spec, const SplitProblem& problem) {
  if (spec.kind == ProblemSpec::Kind::Dahlquist) {
    return static_cast<const DahlquistProblem&>(problem).uniform_state(spec.initial);
  }
  return static_cast<const PlanarSWE&>(problem).jet_initial_condition(spec.jet);
}

std::unique_ptr<Stepper> make_stepper(const StepperSpec& spec, unsigned time_threads) {
  try {
    if (spec.scheme == "imex-o2") return std::make_unique<ImexO2>();
    if (spec.scheme == "ab2-si") return std::make_unique<Ab2SemiImplicit>();
    SdcConfig cfg;
    cfg.table = CollocationTable::radau_right(spec.num_nodes);
    cfg.sweeps = spec.sweeps > 0 ? spec.sweeps : spec.num_nodes;
    cfg.precond = DiagonalPreconditioner(spec.precond);
    cfg.explicit_dtau = spec.explicit_dtau;
    cfg.time_threads = time_threads;
    if (spec.scheme == "sdc") {
      if (time_threads != 1) throw ConfigError("serial SDC cannot use time threads");
      cfg.mode = SdcMode::Serial;
      return std::make_unique<SerialSdc>(cfg);
    }
    if (spec.scheme == "dsdc") {
      cfg.mode = time_threads > 1 ? SdcMode::DiagonalParallel : SdcMode::DiagonalSequential;
      return std::make_unique<DiagonalSdc>(cfg);
    }
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown scheme '" + spec.scheme + "'");
}

}  // namespace psdc::bench
