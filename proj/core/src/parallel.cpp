#include "eigenlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace eigenlab {

namespace {

std::atomic<unsigned> g_threads{1};
std::atomic<std::size_t> g_grid_cap{RuntimeLimits{}.grid_cap};
thread_local bool t_inside_worker = false;

}  // namespace

RuntimeLimits runtime_limits() {
  return RuntimeLimits{g_threads.load(), g_grid_cap.load()};
}

void set_thread_count(unsigned threads) { g_threads.store(std::max(1u, threads)); }

void set_grid_cap(std::size_t cap) { g_grid_cap.store(std::max<std::size_t>(cap, 1)); }

unsigned threads_from_environment() {
  const char* raw = std::getenv("EIGENLAB_THREADS");
  if (raw == nullptr) return 1;
  try {
    const long v = std::stol(raw);
    return v > 0 ? static_cast<unsigned>(v) : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(g_threads.load(), n));
  if (threads <= 1 || t_inside_worker) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      t_inside_worker = true;
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace eigenlab
