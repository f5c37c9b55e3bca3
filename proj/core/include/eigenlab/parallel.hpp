#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace eigenlab {

/// Process-wide execution limits. Read by every heavy operation.
struct RuntimeLimits {
  unsigned threads = 1;
  /// Upper bound on nodes of any single grid, mesh or geodesic family.
  std::size_t grid_cap = 200'000'000;
};

RuntimeLimits runtime_limits();
void set_thread_count(unsigned threads);
void set_grid_cap(std::size_t cap);

/// Thread count from EIGENLAB_THREADS, or 1 when unset or unparsable.
unsigned threads_from_environment();

/// Runs body(i) for i in [0, n). Work is split into contiguous static chunks so
/// any per-index output is independent of the thread count. Calls made from
/// inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise summation; result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values);

}  // namespace eigenlab
