// SPDX-License-Identifier: Apache-2.0
//
// Internal: minimal deterministic parallel-for.  Worker count defaults to the
// hardware concurrency and is capped by the FREQCOVER_THREADS environment
// variable.  Results must be written to per-index slots; the iteration order
// is unspecified but the set of executed indices is exactly [0, n).

#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace freqcover::detail {

inline int thread_cap() {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* env = std::getenv("FREQCOVER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v < threads) threads = static_cast<int>(v);
  }
  return threads;
}

inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
  const int threads = static_cast<int>(std::min<std::int64_t>(thread_cap(), n));
  if (threads <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace freqcover::detail
