// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "psdc/errors.hpp"
#include "psdc/integrators.hpp"
#include "psdc/planar_swe.hpp"

using namespace psdc;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

SweParams small_params(int n = 32) {
  SweParams p;
  p.n = n;
  return p;
}

JetConfig centred_jet(const SweParams& p, double epsilon = 1e-2) {
  JetConfig j;
  j.y0 = 0.5 * p.length;
  j.width = 0.05 * p.length;
  j.epsilon = epsilon;
  return j;
}

// Random state with a Hermitian-consistent spectrum: built from real physical
// fields with realistic magnitudes and truncated to the retained modes.
State random_state(const PlanarSWE& swe, unsigned seed) {
  const double scale[] = {1e3, 1e-5, 1e-6};
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  const std::size_t n2 = static_cast<std::size_t>(swe.n()) * swe.n();
  State s = swe.make_state();
  for (SweField f : {SweField::Geopotential, SweField::Vorticity, SweField::Divergence}) {
    std::vector<double> phys(n2);
    for (double& x : phys) x = scale[static_cast<int>(f)] * g(rng);
    swe.to_spectral(phys, swe.field(s, f));
  }
  swe.field(s, SweField::Vorticity)[0] = 0.0;
  swe.field(s, SweField::Divergence)[0] = 0.0;
  swe.truncate(s);
  return s;
}

double max_abs(const State& s) {
  double m = 0.0;
  for (double x : s.values()) m = std::max(m, std::abs(x));
  return m;
}

double relative_diff(const State& a, const State& b) {
  State d = a;
  d.axpy(-1.0, b);
  return d.norm() / b.norm();
}

}  // namespace

TEST_CASE("transforms round trip") {
  PlanarSWE swe(small_params());
  const int n = swe.n();
  std::vector<double> phys(static_cast<std::size_t>(n) * n);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& x : phys) x = u(rng);
  std::vector<cd> spec(swe.modes());
  swe.to_spectral(phys, spec);
  const auto back = swe.to_physical(spec);
  for (std::size_t i = 0; i < phys.size(); ++i) CHECK(std::abs(back[i] - phys[i]) < 1e-14);
  double sum = 0.0;
  for (double x : phys) sum += x;
  CHECK(spec[0].real() == doctest::Approx(sum));
}

TEST_CASE("grid and jet parameters are validated") {
  SweParams p = small_params();
  p.n = 48;
  CHECK_THROWS_AS(PlanarSWE{p}, ParameterError);
  p = small_params();
  p.phi_bar = 0.0;
  CHECK_THROWS_AS(PlanarSWE{p}, ParameterError);
  p = small_params();
  p.space_threads = 0;
  CHECK_THROWS_AS(PlanarSWE{p}, ParameterError);
  PlanarSWE swe(small_params());
  JetConfig j = centred_jet(small_params());
  j.epsilon = -1.0;
  CHECK_THROWS_AS(swe.jet_initial_condition(j), ParameterError);
  j = centred_jet(small_params());
  j.width = 2.0 * small_params().length;
  CHECK_THROWS_AS(swe.jet_initial_condition(j), ParameterError);
}

TEST_CASE("implicit tendency is the gravity-wave operator") {
  PlanarSWE swe(small_params());
  SUBCASE("zero divergence leaves geopotential and vorticity untouched") {
    State s = random_state(swe, 1);
    for (auto& c : swe.field(s, SweField::Divergence)) c = 0.0;
    const State t = swe.f_implicit(s);
    for (cd c : swe.field(t, SweField::Geopotential)) CHECK(std::abs(c) == 0.0);
    for (cd c : swe.field(t, SweField::Vorticity)) CHECK(std::abs(c) == 0.0);
  }
  SUBCASE("single geopotential mode gives |k|^2 in the divergence tendency") {
    State s = swe.make_state();
    const int iy = 3, ix = 2;
    swe.field(s, SweField::Geopotential)[iy * swe.half() + ix] = 1.0;
    const State t = swe.f_implicit(s);
    const double k = 2.0 * kPi / swe.params().length;
    const double k2 = k * k * (iy * iy + ix * ix);
    CHECK(swe.field(t, SweField::Divergence)[iy * swe.half() + ix].real() == doctest::Approx(k2).epsilon(1e-14));
    CHECK(swe.laplacian_symbol(iy, ix) == doctest::Approx(k2).epsilon(1e-14));
  }
  SUBCASE("linearity") {
    const State a = random_state(swe, 2);
    const State b = random_state(swe, 3);
    State c = a;
    c.scale(0.7);
    c.axpy(-1.3, b);
    State expect = swe.f_implicit(a);
    expect.scale(0.7);
    expect.axpy(-1.3, swe.f_implicit(b));
    CHECK(relative_diff(swe.f_implicit(c), expect) < 1e-12);
  }
}

TEST_CASE("implicit solve") {
  PlanarSWE swe(small_params());
  const State beta = random_state(swe, 4);
  SUBCASE("residual") {
    for (double alpha : {1.0, 60.0, 900.0}) {
      const State x = swe.implicit_solve(alpha, beta, beta);
      State r = x;
      r.axpy(-alpha, swe.f_implicit(x));
      r.axpy(-1.0, beta);
      CHECK(r.norm() <= 1e-12 * beta.norm());
    }
  }
  SUBCASE("alpha zero is the identity") {
    const State x = swe.implicit_solve(0.0, beta, beta);
    CHECK(relative_diff(x, beta) == 0.0);
  }
  SUBCASE("mean mode is unchanged") {
    State b = beta;
    swe.field(b, SweField::Geopotential)[0] = 5.0;
    const State x = swe.implicit_solve(300.0, b, b);
    CHECK(swe.field(x, SweField::Geopotential)[0] == cd(5.0, 0.0));
  }
  SUBCASE("negative alpha is rejected") {
    CHECK_THROWS_AS(swe.implicit_solve(-1.0, beta, beta), ParameterError);
  }
}

TEST_CASE("explicit tendency") {
  SweParams p = small_params();
  SUBCASE("zero state") {
    PlanarSWE swe(p);
    CHECK(swe.f_explicit(swe.make_state()).norm() == 0.0);
  }
  SUBCASE("parallel zonal flow without rotation is steady") {
    p.f0 = 0.0;
    PlanarSWE swe(p);
    const State s = swe.jet_initial_condition(centred_jet(p, 0.0));
    const double scale = 80.0 / p.length;
    CHECK(swe.f_explicit(s).norm() <= 1e-10 * scale * s.norm());
  }
  SUBCASE("geopotential tendency has zero mean and output is dealiased") {
    PlanarSWE swe(p);
    const State s = random_state(swe, 5);
    const State t = swe.f_explicit(s);
    const double ref = max_abs(t);
    CHECK(std::abs(swe.field(t, SweField::Geopotential)[0]) <= 1e-13 * ref);
    for (int iy = 0; iy < swe.n(); ++iy) {
      for (int ix = 0; ix < swe.half(); ++ix) {
        if (swe.retained(iy, ix)) continue;
        for (SweField f : {SweField::Geopotential, SweField::Vorticity, SweField::Divergence}) {
          CHECK(swe.field(t, f)[iy * swe.half() + ix] == cd(0.0, 0.0));
        }
      }
    }
  }
  SUBCASE("hyperviscosity damps a single mode at rate nu k^4") {
    p.nu = 1e15;
    p.f0 = 0.0;
    PlanarSWE swe(p);
    State s = swe.make_state();
    swe.field(s, SweField::Geopotential)[2 * swe.half() + 1] = 1.0;
    const State t = swe.f_explicit(s);
    const double k2 = swe.laplacian_symbol(2, 1);
    CHECK(swe.field(t, SweField::Geopotential)[2 * swe.half() + 1].real() ==
          doctest::Approx(-p.nu * k2 * k2).epsilon(1e-12));
  }
}

TEST_CASE("velocity recovery") {
  PlanarSWE swe(small_params());
  const int n = swe.n();
  const double len = swe.params().length;
  SUBCASE("single vorticity mode") {
    State s = swe.make_state();
    std::vector<double> zeta(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) zeta[j * n + i] = std::cos(2.0 * kPi * i / n);
    swe.to_spectral(zeta, swe.field(s, SweField::Vorticity));
    const VelocityField v = swe.velocity_from_state(s);
    const double amp = len / (2.0 * kPi);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(v.u[j * n + i]) < 1e-9 * amp);
        CHECK(v.v[j * n + i] == doctest::Approx(amp * std::sin(2.0 * kPi * i / n)).epsilon(1e-12).scale(amp));
      }
    }
  }
  SUBCASE("zero fields give zero velocity") {
    const VelocityField v = swe.velocity_from_state(swe.make_state());
    for (double x : v.u) CHECK(x == 0.0);
    for (double x : v.v) CHECK(x == 0.0);
  }
  SUBCASE("round trip through physical velocity") {
    const State s = random_state(swe, 6);
    const VelocityField v = swe.velocity_from_state(s);
    const std::vector<double> phi = swe.to_physical(swe.field(s, SweField::Geopotential));
    State back = swe.state_from_physical(phi, v.u, v.v);
    swe.truncate(back);
    CHECK(relative_diff(back, s) < 1e-12);
  }
  SUBCASE("nonzero mean vorticity is rejected") {
    State s = swe.make_state();
    swe.field(s, SweField::Vorticity)[0] = 1.0;
    CHECK_THROWS_AS(swe.velocity_from_state(s), ValidationError);
  }
}

TEST_CASE("jet initial condition") {
  SweParams p = small_params(64);
  SUBCASE("no rotation means no balancing geopotential") {
    p.f0 = 0.0;
    PlanarSWE swe(p);
    const State s = swe.jet_initial_condition(centred_jet(p));
    for (cd c : swe.field(s, SweField::Geopotential)) CHECK(std::abs(c) == 0.0);
  }
  SUBCASE("balanced jet has a negligible total tendency") {
    PlanarSWE swe(p);
    const State s = swe.jet_initial_condition(centred_jet(p, 0.0));
    State t = swe.f_explicit(s);
    t.add(swe.f_implicit(s));
    const VelocityField v = swe.velocity_from_state(t);
    double vmax = 0.0;
    for (std::size_t i = 0; i < v.u.size(); ++i) vmax = std::max({vmax, std::abs(v.u[i]), std::abs(v.v[i])});
    const double scale = 80.0 * 80.0 / (0.05 * p.length);
    CHECK(vmax <= 1e-8 * scale);
  }
  SUBCASE("perturbation excites divergence at the perturbation wavenumber") {
    PlanarSWE swe(p);
    JetConfig j = centred_jet(p, 1e-4);
    const State s = swe.jet_initial_condition(j);
    const auto div = swe.field(s, SweField::Divergence);
    double total = 0.0, at_k = 0.0;
    for (int iy = 0; iy < swe.n(); ++iy) {
      for (int ix = 0; ix < swe.half(); ++ix) {
        const double e = std::norm(div[iy * swe.half() + ix]);
        total += e;
        if (ix == j.k_pert) at_k += e;
      }
    }
    CHECK(total > 0.0);
    CHECK(at_k > 0.99 * total);
  }
  SUBCASE("initial state is Hermitian and dealiased") {
    PlanarSWE swe(p);
    State s = swe.jet_initial_condition(centred_jet(p));
    CHECK(swe.hermitian_defect(s) <= 1e-13);
    const State copy = s;
    swe.truncate(s);
    CHECK(relative_diff(s, copy) == 0.0);
  }
}

TEST_CASE("conservation under diagonal SDC") {
  SweParams p = small_params();
  PlanarSWE swe(p);
  State s = swe.jet_initial_condition(centred_jet(p));
  // Nonzero mean so the relative drift is meaningful.
  swe.field(s, SweField::Geopotential)[0] = 1e3 * swe.dofs();
  DiagonalSdc stepper(SdcConfig::with_nodes(4));
  const double mass0 = swe.mean_geopotential(s);
  const double e0 = swe.total_energy(s);
  const Trajectory tr = integrate(swe, s, 600.0, 50, stepper);
  const State& end = tr.states.back();
  CHECK(std::abs(swe.mean_geopotential(end) - mass0) <= 1e-10 * std::abs(mass0));
  CHECK(std::abs(swe.total_energy(end) - e0) <= 1e-4 * e0);
  CHECK(swe.hermitian_defect(end) <= 1e-13);
}

TEST_CASE("space threads do not change results") {
  SweParams p = small_params();
  PlanarSWE one(p);
  p.space_threads = 3;
  PlanarSWE three(p);
  const State s = one.jet_initial_condition(centred_jet(p));
  const State a = one.f_explicit(s);
  const State b = three.f_explicit(s);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
}
