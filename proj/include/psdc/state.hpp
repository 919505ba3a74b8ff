// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace psdc {

/// Flat contiguous vector of reals. Complex-valued problems store their
/// components as interleaved (re, im) pairs; the norm is always taken over
/// the underlying reals.
///
/// Every non-empty State counts towards a process-wide live total so tests
/// can bound the number of state-sized buffers an integrator retains.
class State {
 public:
  State() = default;
  explicit State(std::size_t n, double value = 0.0);
  explicit State(std::vector<double> values);
  State(const State& other);
  State(State&& other) noexcept;
  State& operator=(const State& other);
  State& operator=(State&& other) noexcept;
  ~State();

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  /// Copies values from `other` without reallocating when sizes agree.
  void assign(const State& other);
  void fill(double value);
  /// this += a * x
  void axpy(double a, const State& x);
  void add(const State& x);
  void scale(double a);
  /// L2 norm over all real components.
  double norm() const;

  /// Index of the first NaN/Inf component, if any.
  std::optional<std::size_t> first_nonfinite() const;
  /// Throws NumericalError carrying the offending index.
  void require_finite() const;

  void swap(State& other) noexcept { data_.swap(other.data_); }

  // Allocation accounting.
  static long live_count() noexcept;
  static long peak_count() noexcept;
  /// Resets the peak to the current live count.
  static void reset_peak() noexcept;

 private:
  void track_acquire() noexcept;
  void track_release() noexcept;

  std::vector<double> data_;
};

inline void swap(State& a, State& b) noexcept { a.swap(b); }

}  // namespace psdc
