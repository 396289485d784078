#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace aplab {

/// Worker count hint: APLAB_THREADS when set to a positive integer, else the
/// available hardware parallelism (at least 1).
std::size_t worker_count();
/// Overrides the hint for the rest of the process; 0 restores the default.
void set_worker_count(std::size_t n);

namespace detail {
/// True on threads started by parallel_for; nested calls run serially.
inline thread_local bool in_parallel_worker = false;
}  // namespace detail

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. fn must be
/// safe to call concurrently for distinct i. The first exception thrown by
/// any call is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1 || detail::in_parallel_worker) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        detail::in_parallel_worker = true;
        try {
          for (std::size_t i = w; i < n; i += workers) fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace aplab
