#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace convexnn {

// Runs fn(chunk_index, begin, end) over [0, total) split into fixed-size
// chunks. Chunk boundaries depend only on (total, chunk); callers that seed
// per chunk_index and reduce chunk results in index order get output
// independent of the worker count.
inline void parallel_chunks(std::int64_t total, std::int64_t chunk,
                            const std::function<void(int, std::int64_t, std::int64_t)>& fn,
                            int workers = 0) {
  if (total <= 0) return;
  if (chunk <= 0) chunk = 1;
  const int nchunks = int((total + chunk - 1) / chunk);
  if (workers <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    workers = hc == 0 ? 4 : int(hc);
  }
  if (workers > nchunks) workers = nchunks;
  if (workers <= 1) {
    for (int c = 0; c < nchunks; ++c)
      fn(c, std::int64_t(c) * chunk, std::min<std::int64_t>(total, std::int64_t(c + 1) * chunk));
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int c = w; c < nchunks; c += workers)
        fn(c, std::int64_t(c) * chunk, std::min<std::int64_t>(total, std::int64_t(c + 1) * chunk));
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace convexnn
