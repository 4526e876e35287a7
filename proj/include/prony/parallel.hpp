#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace prony {

/// Worker budget: PRONYLAB_THREADS if set (>= 1), else hardware concurrency
/// capped at 8.
inline int thread_budget() {
  if (const char* env = std::getenv("PRONYLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw < 8 ? hw : 8) : 1;
}

/// Runs f(i) for i in [0, n).  Each index must write only its own slots, so
/// results are independent of the schedule; callers that reduce afterwards do
/// so in index order, keeping floating-point output thread-count invariant.
template <typename F>
void parallel_for(int n, F&& f) {
  const int workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> counter{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const int i = counter.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace prony
