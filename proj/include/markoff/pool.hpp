#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace markoff {

/// Runs fn(0..count-1) across a pool of worker threads pulling tasks from a
/// shared counter.  The first exception thrown by any task is rethrown on
/// the calling thread after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };

  std::vector<std::thread> threads;
  unsigned n = std::min<std::size_t>(workers, count);
  threads.reserve(n);
  for (unsigned t = 0; t < n; ++t) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

/// Worker count resolution: explicit flag > MARKOFF_WORKERS env > hardware.
unsigned resolve_workers(int flag_value);

}  // namespace markoff
