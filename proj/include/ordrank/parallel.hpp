#ifndef ORDRANK_PARALLEL_HPP
#define ORDRANK_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ordrank {

/// Evaluates fn(0..count-1) on `threads` workers and returns the results indexed by
/// position, so any fold over the output is independent of the schedule.
template <typename Rec, typename Fn>
std::vector<Rec> parallel_map(std::size_t count, int threads, Fn&& fn) {
  std::vector<Rec> out(count);
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                      std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  constexpr std::size_t chunk = 64;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    try {
      for (;;) {
        const std::size_t start = next.fetch_add(chunk);
        if (start >= count) return;
        const std::size_t stop = std::min(count, start + chunk);
        for (std::size_t i = start; i < stop; ++i) out[i] = fn(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace ordrank

#endif  // ORDRANK_PARALLEL_HPP
