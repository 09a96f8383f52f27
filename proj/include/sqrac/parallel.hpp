#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace sqrac {

/// Calls fn(i) for i in [0, n) on up to `threads` workers (0: hardware
/// concurrency). Each index runs exactly once; results must be written to
/// per-index slots for the outcome to be independent of scheduling.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (n <= 0) return;
  int count = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  count = std::min(count, n);
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < n; i = next++) fn(i);
  };
  if (count == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) pool.emplace_back(worker);
}

}  // namespace sqrac
