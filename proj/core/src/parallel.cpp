#include "aplab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace aplab {

namespace {

std::atomic<std::size_t> g_override{0};

std::size_t from_environment() {
  if (const char* env = std::getenv("APLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
      // ignored: fall back to hardware parallelism
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

std::size_t worker_count() {
  const std::size_t o = g_override.load();
  if (o != 0) return o;
  static const std::size_t env = from_environment();
  return env;
}

void set_worker_count(std::size_t n) { g_override.store(n); }

}  // namespace aplab
