#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace emgtrf {

/// Parallelism level: EMGTRF_THREADS when set, hardware concurrency otherwise.
std::size_t parallelism();

/// Runs fn(i) for i in [0, n) across up to `threads` workers. Work items are
/// claimed from a shared counter; callers write results into per-index slots
/// so output does not depend on scheduling. Exceptions from fn propagate to
/// the caller (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t threads = 0);

inline std::size_t parallelism() {
  if (const char* env = std::getenv("EMGTRF_THREADS")) {
    const long v = std::atol(env);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         std::size_t threads) {
  if (threads == 0) threads = parallelism();
  if (threads > n) threads = n;
  if (n == 0) return;
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n || failed.load(std::memory_order_relaxed)) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace emgtrf
