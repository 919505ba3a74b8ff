// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "psdc/worker_team.hpp"

#include <map>
#include <memory>

#include "psdc/errors.hpp"

namespace psdc {

WorkerTeam::WorkerTeam(unsigned size) : size_(size) {
  if (size == 0) throw ConfigError("worker team needs at least one worker");
  threads_.reserve(size - 1);
  try {
    for (unsigned id = 1; id < size; ++id) threads_.emplace_back([this, id] { worker_loop(id); });
  } catch (const std::system_error& e) {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) t.join();
    throw ConfigError(std::string("cannot start worker threads: ") + e.what());
  }
}

WorkerTeam::~WorkerTeam() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerTeam::worker_loop(unsigned id) {
  std::size_t seen = 0;
  for (;;) {
    const std::function<void(unsigned)>* task = nullptr;
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      task = task_;
    }
    std::exception_ptr err;
    try {
      (*task)(id);
    } catch (...) {
      err = std::current_exception();
    }
    {
      std::lock_guard lock(mutex_);
      if (err && !error_) error_ = err;
      if (--pending_ == 0) done_cv_.notify_one();
    }
  }
}

void WorkerTeam::run(const std::function<void(unsigned)>& task) {
  if (size_ == 1) {
    task(0);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    task_ = &task;
    pending_ = size_ - 1;
    error_ = nullptr;
    ++generation_;
  }
  start_cv_.notify_all();
  std::exception_ptr own;
  try {
    task(0);
  } catch (...) {
    own = std::current_exception();
  }
  std::exception_ptr err;
  {
    std::unique_lock lock(mutex_);
    done_cv_.wait(lock, [&] { return pending_ == 0; });
    task_ = nullptr;
    err = own ? own : error_;
  }
  if (err) std::rethrow_exception(err);
}

void WorkerTeam::parallel_for(std::size_t n,
                              const std::function<void(std::size_t, std::size_t)>& body) {
  if (size_ == 1) {
    body(0, n);
    return;
  }
  run([&](unsigned w) {
    const auto [begin, end] = block_range(n, size_, w);
    if (begin < end) body(begin, end);
  });
}

WorkerTeam& thread_local_team(unsigned size) {
  thread_local std::map<unsigned, std::unique_ptr<WorkerTeam>> teams;
  auto& slot = teams[size];
  if (!slot) slot = std::make_unique<WorkerTeam>(size);
  return *slot;
}

}  // namespace psdc
