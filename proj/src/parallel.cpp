#include "fbu/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace fbu {

namespace {
std::atomic<int> g_threads{1};
thread_local bool t_in_worker = false;  // nested calls stay serial
}

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  const int t = static_cast<int>(
      std::min<std::size_t>(g_threads.load(), n == 0 ? 1 : n));
  if (t <= 1 || n < 2 || t_in_worker) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int w = 0; w < t; ++w) {
    const std::size_t lo = n * w / t;
    const std::size_t hi = n * (w + 1) / t;
    pool.emplace_back([&fn, lo, hi] {
      t_in_worker = true;
      fn(lo, hi);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace fbu
