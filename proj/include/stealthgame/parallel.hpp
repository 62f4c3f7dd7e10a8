#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stealthgame {

/// Worker cap: STEALTHGAME_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Runs fn(k) for k in [0, count) on up to worker_count() threads.
/// The first exception thrown by any task is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        fn(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace stealthgame
