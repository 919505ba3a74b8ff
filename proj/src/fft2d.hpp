// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fftw3.h>

#include <complex>

namespace psdc {

class WorkerTeam;

namespace detail {

/// Real-to-half-complex 2D FFT on an N x N row-major grid, decomposed into
/// row and column 1D transforms so that a worker team can split the work.
/// Each row/column is always transformed by the same plan, so results do not
/// depend on the team size. Forward is unnormalized; inverse divides by N^2.
class Fft2d {
 public:
  explicit Fft2d(int n);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int n() const noexcept { return n_; }
  int half() const noexcept { return n_ / 2 + 1; }

  /// `out` holds N x (N/2+1) coefficients, row index = y wavenumber.
  void forward(const double* in, std::complex<double>* out, WorkerTeam& team) const;
  /// `scratch` must hold N x (N/2+1) coefficients; `in` is left untouched.
  void inverse(const std::complex<double>* in, double* out, std::complex<double>* scratch,
               WorkerTeam& team) const;

 private:
  int n_;
  fftw_plan row_r2c_ = nullptr;
  fftw_plan row_c2r_ = nullptr;
  fftw_plan col_forward_ = nullptr;
  fftw_plan col_backward_ = nullptr;
};

}  // namespace detail
}  // namespace psdc
