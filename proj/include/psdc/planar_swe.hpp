// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "psdc/problem.hpp"

namespace psdc {

namespace detail {
class Fft2d;
}

struct SweParams {
  int n = 64;                ///< grid points per dimension, power of two
  double length = 1.0e7;     ///< domain length per dimension (m)
  double phi_bar = 1.0e5;    ///< mean geopotential (m^2/s^2)
  double f0 = 1.0e-4;        ///< Coriolis parameter (1/s)
  double nu = 0.0;           ///< hyperviscosity coefficient (m^4/s)
  bool dealias = true;       ///< 2/3-rule truncation of quadratic products
  unsigned space_threads = 1;
};

/// Balanced zonal jet with an optional meridional-velocity perturbation.
struct JetConfig {
  double u0 = 80.0;            ///< jet speed (m/s)
  double y0 = 5.0e6;           ///< jet centre (m)
  double width = 5.0e5;        ///< jet half-width L_jet (m)
  double epsilon = 1.0e-2;     ///< perturbation amplitude relative to u0
  int k_pert = 3;              ///< zonal wavenumber of the perturbation

  void validate(double domain_length) const;
};

enum class SweField { Geopotential = 0, Vorticity = 1, Divergence = 2 };

/// Physical-space velocity on the N x N grid (row index = y).
struct VelocityField {
  std::vector<double> u;
  std::vector<double> v;
};

/// Rotating shallow-water equations on a doubly periodic f-plane in
/// vorticity-divergence form, discretized pseudo-spectrally.
///
/// State layout: three blocks of N x (N/2+1) complex coefficients (geopotential
/// perturbation, vorticity, divergence), each row-major with the row index
/// being the y wavenumber (0..N/2, then negative) and the column the
/// non-negative x wavenumber. Coefficients are those of an unnormalized
/// forward FFT; the inverse divides by N^2.
///
/// Splitting: f_I is the linear gravity-wave operator
///   phi_t = -phi_bar * delta,  zeta_t = 0,  delta_t = -lap(phi),
/// f_E collects Coriolis, advection, the nonlinear mass flux and optional
/// nu * lap^2 damping.
class PlanarSWE final : public SplitProblem {
 public:
  explicit PlanarSWE(const SweParams& params);
  ~PlanarSWE() override;

  std::string name() const override { return "planar-swe"; }
  std::size_t size() const override { return 3 * modes() * 2; }
  /// Grid points, the unit used for time-per-DoF metrics.
  std::size_t dofs() const override { return static_cast<std::size_t>(params_.n) * params_.n; }

  const SweParams& params() const noexcept { return params_; }
  int n() const noexcept { return params_.n; }
  int half() const noexcept { return params_.n / 2 + 1; }
  std::size_t modes() const noexcept { return static_cast<std::size_t>(n()) * half(); }
  double cell_area() const noexcept;

  std::span<std::complex<double>> field(State& s, SweField f) const;
  std::span<const std::complex<double>> field(const State& s, SweField f) const;

  int wavenumber_x(int ix) const noexcept { return ix; }
  int wavenumber_y(int iy) const noexcept { return iy <= n() / 2 ? iy : iy - n(); }
  /// |k|^2 in physical units (1/m^2), the non-negative Laplacian symbol.
  double laplacian_symbol(int iy, int ix) const noexcept { return k2_[iy * half() + ix]; }
  /// True for modes kept by the dealiasing mask.
  bool retained(int iy, int ix) const noexcept { return mask_[iy * half() + ix] != 0; }

  /// Forward transform of an N x N physical field into a state block.
  void to_spectral(std::span<const double> physical, std::span<std::complex<double>> spectral) const;
  /// Inverse transform of a state block to an N x N physical field.
  std::vector<double> to_physical(std::span<const std::complex<double>> spectral) const;

  /// Recovers V = perp-grad(psi) + grad(chi) with lap(psi) = zeta, lap(chi) = delta.
  /// Throws ValidationError if zeta or delta carry a nonzero mean.
  VelocityField velocity_from_state(const State& s) const;

  /// Builds a state from physical fields (phi', u, v); mean velocity is dropped.
  State state_from_physical(std::span<const double> phi, std::span<const double> u,
                            std::span<const double> v) const;

  /// Zeroes every mode outside the dealiasing mask.
  void truncate(State& s) const;

  State jet_initial_condition(const JetConfig& cfg) const;

  double mean_geopotential(const State& s) const;
  /// Integral of 0.5 * (phi_bar + phi') |V|^2 + 0.5 * phi'^2 over the domain.
  double total_energy(const State& s) const;
  /// Largest violation of the Hermitian symmetry of the kx = 0 and kx = N/2
  /// columns, relative to the largest coefficient magnitude.
  double hermitian_defect(const State& s) const;

 protected:
  void do_eval_explicit(const State& u, State& out) const override;
  void do_eval_implicit(const State& u, State& out) const override;
  void do_solve_implicit(double alpha, const State& rhs, const State& guess,
                         State& out) const override;

 private:
  struct Scratch;
  Scratch& scratch() const;
  void spectral_velocity(std::span<const std::complex<double>> zeta,
                         std::span<const std::complex<double>> delta, std::complex<double>* u_hat,
                         std::complex<double>* v_hat) const;

  SweParams params_;
  std::unique_ptr<detail::Fft2d> fft_;
  std::vector<double> kx_, ky_, k2_;
  std::vector<unsigned char> mask_;
};

/// Free-function form of the jet initial condition.
inline State jet_initial_condition(const JetConfig& cfg, const PlanarSWE& problem) {
  return problem.jet_initial_condition(cfg);
}

}  // namespace psdc
