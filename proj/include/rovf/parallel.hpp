#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace rovf {

/// Splits [0, count) into contiguous chunks, one worker thread per chunk.
/// Work items must write to disjoint, preallocated slots; any reduction
/// happens afterwards in index order, so results do not depend on the
/// worker count.
inline void parallel_chunks(long count, int n_threads,
                            const std::function<void(long, long)>& work) {
  if (n_threads <= 1 || count < 2) {
    work(0, count);
    return;
  }
  long chunk = (count + n_threads - 1) / n_threads;
  std::vector<std::thread> workers;
  for (int t = 0; t < n_threads; ++t) {
    long begin = static_cast<long>(t) * chunk;
    long end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(work, begin, end);
  }
  for (auto& w : workers) w.join();
}

}  // namespace rovf
