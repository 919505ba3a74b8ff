// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "fft2d.hpp"

#include <mutex>
#include <vector>

#include "psdc/errors.hpp"
#include "psdc/worker_team.hpp"

namespace psdc::detail {
namespace {

// FFTW's planner is not thread-safe; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Fft2d::Fft2d(int n) : n_(n) {
  if (n < 4 || (n & (n - 1)) != 0) throw ParameterError("FFT grid size must be a power of two >= 4");
  const int h = half();
  std::vector<double> real(static_cast<std::size_t>(n) * n);
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(n) * h);
  std::lock_guard lock(planner_mutex());
  row_r2c_ = fftw_plan_dft_r2c_1d(n, real.data(), as_fftw(spec.data()), kPlanFlags);
  row_c2r_ = fftw_plan_dft_c2r_1d(n, as_fftw(spec.data()), real.data(), kPlanFlags);
  int len[] = {n};
  col_forward_ = fftw_plan_many_dft(1, len, 1, as_fftw(spec.data()), nullptr, h, 1,
                                    as_fftw(spec.data()), nullptr, h, 1, FFTW_FORWARD, kPlanFlags);
  col_backward_ = fftw_plan_many_dft(1, len, 1, as_fftw(spec.data()), nullptr, h, 1,
                                     as_fftw(spec.data()), nullptr, h, 1, FFTW_BACKWARD, kPlanFlags);
  if (!row_r2c_ || !row_c2r_ || !col_forward_ || !col_backward_) {
    throw ConfigError("FFTW plan creation failed");
  }
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  for (fftw_plan p : {row_r2c_, row_c2r_, col_forward_, col_backward_}) {
    if (p) fftw_destroy_plan(p);
  }
}

void Fft2d::forward(const double* in, std::complex<double>* out, WorkerTeam& team) const {
  const int n = n_, h = half();
  team.parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t row = begin; row < end; ++row) {
      // r2c out-of-place leaves its input intact.
      fftw_execute_dft_r2c(row_r2c_, const_cast<double*>(in + row * n), as_fftw(out + row * h));
    }
  });
  team.parallel_for(h, [&](std::size_t begin, std::size_t end) {
    for (std::size_t col = begin; col < end; ++col) {
      fftw_execute_dft(col_forward_, as_fftw(out + col), as_fftw(out + col));
    }
  });
}

void Fft2d::inverse(const std::complex<double>* in, double* out, std::complex<double>* scratch,
                    WorkerTeam& team) const {
  const int n = n_, h = half();
  const double norm = 1.0 / (static_cast<double>(n) * n);
  team.parallel_for(h, [&](std::size_t begin, std::size_t end) {
    for (std::size_t col = begin; col < end; ++col) {
      for (int row = 0; row < n; ++row) scratch[row * h + col] = in[row * h + col];
      fftw_execute_dft(col_backward_, as_fftw(scratch + col), as_fftw(scratch + col));
    }
  });
  team.parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t row = begin; row < end; ++row) {
      double* dst = out + row * n;
      fftw_execute_dft_c2r(row_c2r_, as_fftw(scratch + row * h), dst);
      for (int i = 0; i < n; ++i) dst[i] *= norm;
    }
  });
}

}  // namespace psdc::detail
