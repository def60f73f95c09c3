#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace jamsim {

/// Runs body(i) for i in [0, n). Work is pulled from an atomic counter, so
/// scheduling is dynamic, but bodies must write only to their own slot i;
/// results are then independent of thread count and interleaving.
/// threads <= 1 (or n <= 1) runs inline. The first exception thrown by any
/// body is rethrown on the caller.
inline void parallel_for(std::int64_t n, int threads,
                         const std::function<void(std::int64_t)>& body) {
  if (n <= 0) return;
  const unsigned hw = std::thread::hardware_concurrency();
  int workers = threads > 0 ? threads : static_cast<int>(hw ? hw : 1);
  if (workers > n) workers = static_cast<int>(n);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace jamsim
