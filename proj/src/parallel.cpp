#include "dgsp/parallel.hpp"

#include <thread>
#include <vector>

namespace dgsp {

void parallel_for(std::int64_t count, int workers,
                  const std::function<void(std::int64_t)>& fn) {
  if (workers <= 1 || count < 2 * workers) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = count * w / workers;
    const std::int64_t hi = count * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace dgsp
