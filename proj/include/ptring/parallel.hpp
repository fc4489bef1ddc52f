// Deterministic work-sharing: each task writes a preallocated slot keyed by
// its index, so results are byte-identical for any worker count.
#ifndef PTRING_PARALLEL_HPP
#define PTRING_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ptring {

inline int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

// Runs body(i) for i in [0, count) on `workers` threads.  Tasks are claimed
// from a shared atomic counter; the first exception is rethrown on the
// calling thread after all workers join.
template <class F>
void parallel_for(std::size_t count, int workers, F&& body) {
  if (workers < 1) workers = 1;
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(size_t(workers));
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= count || failed.load()) return;
          try {
            body(i);
          } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!error) error = std::current_exception();
            failed.store(true);
            return;
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

} // namespace ptring

#endif
