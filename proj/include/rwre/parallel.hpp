#ifndef RWRE_PARALLEL_HPP
#define RWRE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rwre {

// Runs body(0..jobs-1) on `workers` threads. Jobs must write only to their
// own output slot; results are then independent of the worker count and of
// scheduling order.
inline void parallel_for(int workers, std::int64_t jobs,
                         const std::function<void(std::int64_t)>& body) {
  if (jobs <= 0) return;
  workers = static_cast<int>(
      std::max<std::int64_t>(1, std::min<std::int64_t>(workers, jobs)));
  if (workers == 1) {
    for (std::int64_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= jobs) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rwre

#endif
