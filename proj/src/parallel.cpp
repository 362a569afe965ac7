#include "bsc/parallel.hpp"

#include <atomic>
#include <thread>

namespace bsc {

namespace {
int g_threads = 1;
}

void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }

int thread_count() { return g_threads; }

void for_each_chunk(std::size_t n_chunks, const std::function<void(std::size_t)>& fn) {
  const int nt = g_threads;
  if (nt <= 1 || n_chunks <= 1) {
    for (std::size_t i = 0; i < n_chunks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n_chunks) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int use = nt;
  if (static_cast<std::size_t>(use) > n_chunks) use = static_cast<int>(n_chunks);
  pool.reserve(use);
  for (int t = 0; t < use; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

double sum_over_chunks(std::size_t n_chunks, const std::function<double(std::size_t)>& fn) {
  std::vector<double> partial(n_chunks, 0.0);
  for_each_chunk(n_chunks, [&](std::size_t i) { partial[i] = fn(i); });
  double s = 0.0;
  for (std::size_t i = 0; i < n_chunks; ++i) s += partial[i];
  return s;
}

}  // namespace bsc
