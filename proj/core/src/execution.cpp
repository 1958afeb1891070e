#include "spamm/execution.hpp"

#include <atomic>

namespace spamm::exec {

namespace {
std::atomic<int> g_max_threads{1};
}

void set_max_threads(int threads) {
  g_max_threads.store(threads < 1 ? 1 : threads, std::memory_order_relaxed);
}

int max_threads() noexcept { return g_max_threads.load(std::memory_order_relaxed); }

int spawn_levels() noexcept {
  const int threads = max_threads();
  int levels = 0;
  // 4^levels tasks per kernel invocation; stop once that covers the budget.
  for (int capacity = 1; capacity < threads && levels < 3; capacity *= 4) ++levels;
  return levels;
}

}  // namespace spamm::exec
