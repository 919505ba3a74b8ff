// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "psdc/planar_swe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "fft2d.hpp"
#include "psdc/errors.hpp"
#include "psdc/worker_team.hpp"

namespace psdc {

using cplx = std::complex<double>;

namespace {
constexpr cplx kI{0.0, 1.0};
}

// Per-thread work buffers, keyed by grid size. Space-team helpers write into
// the buffers of the thread that owns the team.
struct PlanarSWE::Scratch {
  explicit Scratch(std::size_t modes, std::size_t points) : inverse_work(modes) {
    for (auto& s : spec) s.resize(modes);
    for (auto& p : phys) p.resize(points);
  }
  std::vector<cplx> spec[5];
  std::vector<double> phys[5];
  std::vector<cplx> inverse_work;
};

void JetConfig::validate(double domain_length) const {
  if (!(epsilon >= 0.0)) throw ParameterError("jet perturbation amplitude must be >= 0");
  if (!(width > 0.0 && width < domain_length)) {
    throw ParameterError("jet width must lie in (0, L)");
  }
  if (k_pert < 0) throw ParameterError("jet perturbation wavenumber must be >= 0");
}

PlanarSWE::PlanarSWE(const SweParams& params) : params_(params) {
  if (params.n < 4 || (params.n & (params.n - 1)) != 0) {
    throw ParameterError("grid size must be a power of two >= 4");
  }
  if (!(params.length > 0.0)) throw ParameterError("domain length must be positive");
  if (!(params.phi_bar > 0.0)) throw ParameterError("mean geopotential must be positive");
  if (!(params.nu >= 0.0)) throw ParameterError("hyperviscosity must be >= 0");
  if (params.space_threads == 0) throw ParameterError("space_threads must be >= 1");
  fft_ = std::make_unique<detail::Fft2d>(params.n);

  const int n = params.n, h = half();
  const double dk = 2.0 * std::numbers::pi / params.length;
  // Largest retained integer wavenumber: products of two retained modes must
  // alias only onto discarded ones, i.e. 3 * kmax < N.
  const int kmax = params.dealias ? (n % 3 == 0 ? n / 3 - 1 : n / 3) : n / 2 - 1;
  kx_.resize(h);
  ky_.resize(n);
  k2_.resize(modes());
  mask_.resize(modes());
  for (int ix = 0; ix < h; ++ix) kx_[ix] = dk * wavenumber_x(ix);
  for (int iy = 0; iy < n; ++iy) ky_[iy] = dk * wavenumber_y(iy);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < h; ++ix) {
      const std::size_t idx = static_cast<std::size_t>(iy) * h + ix;
      k2_[idx] = kx_[ix] * kx_[ix] + ky_[iy] * ky_[iy];
      mask_[idx] = std::abs(wavenumber_x(ix)) <= kmax && std::abs(wavenumber_y(iy)) <= kmax;
    }
  }
}

PlanarSWE::~PlanarSWE() = default;

double PlanarSWE::cell_area() const noexcept {
  const double dx = params_.length / params_.n;
  return dx * dx;
}

PlanarSWE::Scratch& PlanarSWE::scratch() const {
  thread_local std::map<int, std::unique_ptr<Scratch>> pool;
  auto& slot = pool[params_.n];
  if (!slot) slot = std::make_unique<Scratch>(modes(), dofs());
  return *slot;
}

std::span<cplx> PlanarSWE::field(State& s, SweField f) const {
  auto* base = reinterpret_cast<cplx*>(s.data());
  return {base + static_cast<std::size_t>(f) * modes(), modes()};
}

std::span<const cplx> PlanarSWE::field(const State& s, SweField f) const {
  const auto* base = reinterpret_cast<const cplx*>(s.data());
  return {base + static_cast<std::size_t>(f) * modes(), modes()};
}

void PlanarSWE::to_spectral(std::span<const double> physical, std::span<cplx> spectral) const {
  if (physical.size() != dofs() || spectral.size() != modes()) {
    throw ValidationError("field size does not match the grid");
  }
  fft_->forward(physical.data(), spectral.data(), thread_local_team(params_.space_threads));
}

std::vector<double> PlanarSWE::to_physical(std::span<const cplx> spectral) const {
  if (spectral.size() != modes()) throw ValidationError("field size does not match the grid");
  std::vector<double> out(dofs());
  fft_->inverse(spectral.data(), out.data(), scratch().inverse_work.data(),
                thread_local_team(params_.space_threads));
  return out;
}

void PlanarSWE::spectral_velocity(std::span<const cplx> zeta, std::span<const cplx> delta,
                                  cplx* u_hat, cplx* v_hat) const {
  const int h = half();
  for (std::size_t idx = 0; idx < modes(); ++idx) {
    const double k2 = k2_[idx];
    if (k2 == 0.0) {
      u_hat[idx] = v_hat[idx] = 0.0;
      continue;
    }
    const double kx = kx_[idx % h], ky = ky_[idx / h];
    const cplx psi = -zeta[idx] / k2, chi = -delta[idx] / k2;
    u_hat[idx] = -kI * ky * psi + kI * kx * chi;
    v_hat[idx] = kI * kx * psi + kI * ky * chi;
  }
}

VelocityField PlanarSWE::velocity_from_state(const State& s) const {
  if (s.size() != size()) throw ValidationError("state size does not match the problem");
  for (SweField f : {SweField::Vorticity, SweField::Divergence}) {
    const auto x = field(s, f);
    double norm2 = 0.0;
    for (const cplx& c : x) norm2 += std::norm(c);
    if (std::abs(x[0]) > 1e-12 * std::sqrt(norm2)) {
      throw ValidationError("vorticity and divergence must have zero mean");
    }
  }
  std::vector<cplx> u_hat(modes()), v_hat(modes());
  spectral_velocity(field(s, SweField::Vorticity), field(s, SweField::Divergence), u_hat.data(),
                    v_hat.data());
  return {to_physical(u_hat), to_physical(v_hat)};
}

State PlanarSWE::state_from_physical(std::span<const double> phi, std::span<const double> u,
                                     std::span<const double> v) const {
  State s(size());
  std::vector<cplx> u_hat(modes()), v_hat(modes());
  to_spectral(phi, field(s, SweField::Geopotential));
  to_spectral(u, u_hat);
  to_spectral(v, v_hat);
  auto zeta = field(s, SweField::Vorticity);
  auto delta = field(s, SweField::Divergence);
  const int h = half();
  for (std::size_t idx = 0; idx < modes(); ++idx) {
    const double kx = kx_[idx % h], ky = ky_[idx / h];
    zeta[idx] = kI * kx * v_hat[idx] - kI * ky * u_hat[idx];
    delta[idx] = kI * kx * u_hat[idx] + kI * ky * v_hat[idx];
  }
  return s;
}

void PlanarSWE::truncate(State& s) const {
  for (SweField f : {SweField::Geopotential, SweField::Vorticity, SweField::Divergence}) {
    auto x = field(s, f);
    for (std::size_t idx = 0; idx < modes(); ++idx) {
      if (!mask_[idx]) x[idx] = 0.0;
    }
  }
}

State PlanarSWE::jet_initial_condition(const JetConfig& cfg) const {
  cfg.validate(params_.length);
  const int n = params_.n, h = half();
  const double dx = params_.length / n;
  std::vector<double> u(dofs()), v(dofs()), phi(dofs(), 0.0);
  std::vector<double> profile(n);
  double mean = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s = 1.0 / std::cosh((j * dx - cfg.y0) / cfg.width);
    profile[j] = cfg.u0 * s * s;
    mean += profile[j] / n;
  }
  // A periodic plane cannot carry a net geostrophic flow, so the domain mean
  // of the jet is removed.
  for (int j = 0; j < n; ++j) {
    const double y = j * dx;
    const double envelope = std::exp(-std::pow((y - cfg.y0) / cfg.width, 2));
    for (int i = 0; i < n; ++i) {
      const double x = i * dx;
      u[j * n + i] = profile[j] - mean;
      v[j * n + i] = cfg.epsilon * cfg.u0 *
                     std::cos(2.0 * std::numbers::pi * cfg.k_pert * x / params_.length) * envelope;
    }
  }
  State s = state_from_physical(phi, u, v);

  // Geostrophic balance d(phi)/dy = -f0 u for the zonal flow.
  std::vector<cplx> u_hat(modes());
  std::vector<double> zonal(dofs());
  for (int j = 0; j < n; ++j) std::fill_n(zonal.begin() + j * n, n, profile[j] - mean);
  to_spectral(zonal, u_hat);
  auto phi_hat = field(s, SweField::Geopotential);
  for (int iy = 0; iy < n; ++iy) {
    const std::size_t idx = static_cast<std::size_t>(iy) * h;
    phi_hat[idx] = ky_[iy] == 0.0 ? cplx{0.0} : kI * params_.f0 * u_hat[idx] / ky_[iy];
  }
  truncate(s);
  return s;
}

double PlanarSWE::mean_geopotential(const State& s) const {
  return field(s, SweField::Geopotential)[0].real() / static_cast<double>(dofs());
}

double PlanarSWE::total_energy(const State& s) const {
  const VelocityField vel = velocity_from_state(s);
  const std::vector<double> phi = to_physical(field(s, SweField::Geopotential));
  double e = 0.0;
  for (std::size_t i = 0; i < dofs(); ++i) {
    const double ke = vel.u[i] * vel.u[i] + vel.v[i] * vel.v[i];
    e += 0.5 * (params_.phi_bar + phi[i]) * ke + 0.5 * phi[i] * phi[i];
  }
  return e * cell_area();
}

double PlanarSWE::hermitian_defect(const State& s) const {
  const int n = params_.n, h = half();
  double worst = 0.0, scale = 0.0;
  for (SweField f : {SweField::Geopotential, SweField::Vorticity, SweField::Divergence}) {
    const auto x = field(s, f);
    for (const cplx& c : x) scale = std::max(scale, std::abs(c));
    for (int ix : {0, n / 2}) {
      for (int iy = 0; iy < n; ++iy) {
        const int partner = (n - iy) % n;
        worst = std::max(worst, std::abs(x[iy * h + ix] - std::conj(x[partner * h + ix])));
      }
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

void PlanarSWE::do_eval_explicit(const State& state, State& out) const {
  WorkerTeam& team = thread_local_team(params_.space_threads);
  Scratch& sc = scratch();
  const int n = params_.n, h = half();
  const auto phi = field(state, SweField::Geopotential);
  const auto zeta = field(state, SweField::Vorticity);
  const auto delta = field(state, SweField::Divergence);
  cplx* u_hat = sc.spec[0].data();
  cplx* v_hat = sc.spec[1].data();
  cplx* zeta_hat = sc.spec[2].data();
  cplx* phi_hat = sc.spec[3].data();

  // Truncated inputs and the spectral velocity.
  team.parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin * h; idx < end * h; ++idx) {
      const bool keep = mask_[idx] != 0;
      const cplx z = keep ? zeta[idx] : cplx{};
      const cplx d = keep ? delta[idx] : cplx{};
      zeta_hat[idx] = z;
      phi_hat[idx] = keep ? phi[idx] : cplx{};
      const double k2 = k2_[idx];
      if (k2 == 0.0) {
        u_hat[idx] = v_hat[idx] = 0.0;
        continue;
      }
      const double kx = kx_[idx % h], ky = ky_[idx / h];
      const cplx psi = -z / k2, chi = -d / k2;
      u_hat[idx] = -kI * ky * psi + kI * kx * chi;
      v_hat[idx] = kI * kx * psi + kI * ky * chi;
    }
  });

  double* u = sc.phys[0].data();
  double* v = sc.phys[1].data();
  double* z = sc.phys[2].data();
  double* p = sc.phys[3].data();
  double* ke = sc.phys[4].data();
  cplx* work = sc.inverse_work.data();
  fft_->inverse(u_hat, u, work, team);
  fft_->inverse(v_hat, v, work, team);
  fft_->inverse(zeta_hat, z, work, team);
  fft_->inverse(phi_hat, p, work, team);

  // Quadratic products, overwriting the inputs point by point:
  // (u, v, zeta, phi) -> (phi u, phi v, zeta u, zeta v), plus |V|^2 / 2.
  team.parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin * n; i < end * n; ++i) {
      const double ui = u[i], vi = v[i], zi = z[i], pi = p[i];
      u[i] = pi * ui;
      v[i] = pi * vi;
      z[i] = zi * ui;
      p[i] = zi * vi;
      ke[i] = 0.5 * (ui * ui + vi * vi);
    }
  });

  cplx* flux_phi_x = sc.spec[0].data();
  cplx* flux_phi_y = sc.spec[1].data();
  cplx* flux_zeta_x = sc.spec[2].data();
  cplx* flux_zeta_y = sc.spec[3].data();
  cplx* ke_hat = sc.spec[4].data();
  fft_->forward(u, flux_phi_x, team);
  fft_->forward(v, flux_phi_y, team);
  fft_->forward(z, flux_zeta_x, team);
  fft_->forward(p, flux_zeta_y, team);
  fft_->forward(ke, ke_hat, team);

  auto phi_t = field(out, SweField::Geopotential);
  auto zeta_t = field(out, SweField::Vorticity);
  auto delta_t = field(out, SweField::Divergence);
  const double f0 = params_.f0, nu = params_.nu;
  team.parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin * h; idx < end * h; ++idx) {
      if (!mask_[idx]) {
        phi_t[idx] = zeta_t[idx] = delta_t[idx] = 0.0;
        continue;
      }
      const double kx = kx_[idx % h], ky = ky_[idx / h], k2 = k2_[idx];
      const cplx ikx = kI * kx, iky = kI * ky;
      cplx dphi = -(ikx * flux_phi_x[idx] + iky * flux_phi_y[idx]);
      cplx dzeta = -f0 * delta[idx] - (ikx * flux_zeta_x[idx] + iky * flux_zeta_y[idx]);
      cplx ddelta = f0 * zeta[idx] + (ikx * flux_zeta_y[idx] - iky * flux_zeta_x[idx]) + k2 * ke_hat[idx];
      if (nu > 0.0) {
        const double damp = nu * k2 * k2;
        dphi -= damp * phi[idx];
        dzeta -= damp * zeta[idx];
        ddelta -= damp * delta[idx];
      }
      phi_t[idx] = dphi;
      zeta_t[idx] = dzeta;
      delta_t[idx] = ddelta;
    }
  });
}

void PlanarSWE::do_eval_implicit(const State& state, State& out) const {
  const auto phi = field(state, SweField::Geopotential);
  const auto delta = field(state, SweField::Divergence);
  auto phi_t = field(out, SweField::Geopotential);
  auto zeta_t = field(out, SweField::Vorticity);
  auto delta_t = field(out, SweField::Divergence);
  const double phi_bar = params_.phi_bar;
  const int h = half();
  thread_local_team(params_.space_threads).parallel_for(n(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin * h; idx < end * h; ++idx) {
      phi_t[idx] = -phi_bar * delta[idx];
      zeta_t[idx] = 0.0;
      delta_t[idx] = k2_[idx] * phi[idx];
    }
  });
}

void PlanarSWE::do_solve_implicit(double alpha, const State& rhs, const State& /*guess*/,
                                  State& out) const {
  if (!(alpha >= 0.0)) throw ParameterError("implicit solve needs alpha >= 0");
  const auto b_phi = field(rhs, SweField::Geopotential);
  const auto b_zeta = field(rhs, SweField::Vorticity);
  const auto b_delta = field(rhs, SweField::Divergence);
  auto phi = field(out, SweField::Geopotential);
  auto zeta = field(out, SweField::Vorticity);
  auto delta = field(out, SweField::Divergence);
  const double phi_bar = params_.phi_bar;
  const int h = half();
  thread_local_team(params_.space_threads).parallel_for(n(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin * h; idx < end * h; ++idx) {
      const double k2 = k2_[idx];
      const cplx bp = b_phi[idx], bd = b_delta[idx], bz = b_zeta[idx];
      const cplx p = (bp - alpha * phi_bar * bd) / (1.0 + alpha * alpha * phi_bar * k2);
      phi[idx] = p;
      delta[idx] = bd + alpha * k2 * p;
      zeta[idx] = bz;
    }
  });
}

}  // namespace psdc
