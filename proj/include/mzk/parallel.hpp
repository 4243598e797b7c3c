#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mzk {

/// Runs body(i) for i in [0, n) on at most `threads` workers. Work items are
/// claimed dynamically, so callers that need reproducible output should
/// write into slot i and reduce afterwards in index order. The first
/// exception thrown by any item is rethrown after all workers finish.
template <class Body>
void parallel_for(int n, int threads, Body&& body) {
  const int workers = std::clamp(threads, 1, std::max(n, 1));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mzk
