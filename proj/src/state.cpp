// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "psdc/state.hpp"

#include <cmath>
#include <string>

#include "psdc/errors.hpp"

namespace psdc {
namespace {

std::atomic<long> g_live{0};
std::atomic<long> g_peak{0};

}  // namespace

void State::track_acquire() noexcept {
  const long now = g_live.fetch_add(1, std::memory_order_relaxed) + 1;
  long peak = g_peak.load(std::memory_order_relaxed);
  while (now > peak && !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
  }
}

void State::track_release() noexcept { g_live.fetch_sub(1, std::memory_order_relaxed); }

long State::live_count() noexcept { return g_live.load(std::memory_order_relaxed); }
long State::peak_count() noexcept { return g_peak.load(std::memory_order_relaxed); }
void State::reset_peak() noexcept { g_peak.store(g_live.load(std::memory_order_relaxed)); }

State::State(std::size_t n, double value) : data_(n, value) {
  if (!data_.empty()) track_acquire();
}

State::State(std::vector<double> values) : data_(std::move(values)) {
  if (!data_.empty()) track_acquire();
}

State::State(const State& other) : data_(other.data_) {
  if (!data_.empty()) track_acquire();
}

State::State(State&& other) noexcept : data_(std::move(other.data_)) { other.data_ = {}; }

State& State::operator=(const State& other) {
  if (this == &other) return *this;
  const bool had = !data_.empty();
  data_ = other.data_;
  if (had && data_.empty()) track_release();
  if (!had && !data_.empty()) track_acquire();
  return *this;
}

State& State::operator=(State&& other) noexcept {
  if (this == &other) return *this;
  if (!data_.empty()) track_release();
  data_ = std::move(other.data_);
  other.data_ = {};
  return *this;
}

State::~State() {
  if (!data_.empty()) track_release();
}

void State::assign(const State& other) {
  if (data_.size() == other.data_.size()) {
    std::copy(other.data_.begin(), other.data_.end(), data_.begin());
  } else {
    *this = other;
  }
}

void State::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

void State::axpy(double a, const State& x) {
  const double* xp = x.data();
  double* yp = data_.data();
  const std::size_t n = data_.size();
  for (std::size_t i = 0; i < n; ++i) yp[i] += a * xp[i];
}

void State::add(const State& x) {
  const double* xp = x.data();
  double* yp = data_.data();
  const std::size_t n = data_.size();
  for (std::size_t i = 0; i < n; ++i) yp[i] += xp[i];
}

void State::scale(double a) {
  for (double& v : data_) v *= a;
}

double State::norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

std::optional<std::size_t> State::first_nonfinite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) return i;
  }
  return std::nullopt;
}

void State::require_finite() const {
  if (auto bad = first_nonfinite()) {
    throw NumericalError("non-finite state component at index " + std::to_string(*bad), *bad);
  }
}

}  // namespace psdc
