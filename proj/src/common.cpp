#include "ila/common.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace ila {

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& body,
                  int workers) {
  if (n <= 0) return;
  if (workers <= 0) workers = default_workers();

  // Chunk grid fixed by n alone; workers race over chunks.
  const std::int64_t chunk = std::max<std::int64_t>(1, std::min<std::int64_t>(256, (n + 63) / 64));
  const std::int64_t n_chunks = (n + chunk - 1) / chunk;

  if (workers == 1 || n_chunks == 1) {
    body(0, n);
    return;
  }

  std::atomic<std::int64_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      const std::int64_t begin = c * chunk;
      body(begin, std::min(begin + chunk, n));
    }
  };

  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, n_chunks));
  pool.reserve(n_threads - 1);
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

}  // namespace ila
