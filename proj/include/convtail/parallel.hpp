#pragma once

// Minimal data-parallel helper. CONVTAIL_THREADS caps the worker count
// (0 or unset = hardware concurrency). Work items write results by index,
// so assembly order is deterministic regardless of the thread count.

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace convtail {

int thread_budget();

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const int budget = thread_budget();
  if (budget <= 1 || n < 4) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(budget, n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace convtail
