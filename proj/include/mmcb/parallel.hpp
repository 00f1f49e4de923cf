// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_PARALLEL_HPP
#define MMCB_PARALLEL_HPP

#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mmcb {

/// Runs fn(worker_id) on `workers` threads; workers == 1 stays on the
/// calling thread. The first worker exception is rethrown after join.
inline void run_workers(int workers, const std::function<void(int)>& fn) {
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (workers == 1) {
    fn(0);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace mmcb

#endif  // MMCB_PARALLEL_HPP
