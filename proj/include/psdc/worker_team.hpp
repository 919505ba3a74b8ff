// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace psdc {

/// Fixed-size team of persistent workers. The calling thread acts as worker 0,
/// so a team of size n spawns n - 1 threads. run() hands the same task to every
/// worker and returns once all of them finished, which makes each call a full
/// barrier. Work is assigned statically by worker index, so results never
/// depend on scheduling.
class WorkerTeam {
 public:
  explicit WorkerTeam(unsigned size);
  ~WorkerTeam();
  WorkerTeam(const WorkerTeam&) = delete;
  WorkerTeam& operator=(const WorkerTeam&) = delete;

  unsigned size() const noexcept { return size_; }

  /// Calls task(worker) for worker = 0..size()-1. The first exception thrown by
  /// any worker is rethrown on the caller after the barrier.
  void run(const std::function<void(unsigned)>& task);

  /// Splits [0, n) into size() contiguous blocks and runs body(begin, end).
  void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

 private:
  void worker_loop(unsigned id);

  unsigned size_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(unsigned)>* task_ = nullptr;
  std::size_t generation_ = 0;
  unsigned pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

/// Team of the given size owned by the calling thread, created on first use.
/// Lets each outer (time) worker drive its own inner (space) team without
/// sharing threads between nesting levels.
WorkerTeam& thread_local_team(unsigned size);

/// Block boundaries used by parallel_for: block `i` of `parts` over [0, n).
inline std::pair<std::size_t, std::size_t> block_range(std::size_t n, unsigned parts, unsigned i) {
  const std::size_t base = n / parts, extra = n % parts;
  const std::size_t begin = i * base + (i < extra ? i : extra);
  return {begin, begin + base + (i < extra ? 1 : 0)};
}

}  // namespace psdc
