#ifndef GIBBSLAB_PARALLEL_HPP
#define GIBBSLAB_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace gibbslab {

// Run fn(i) for i in [0, count) across up to `threads` workers. Each index
// writes to its own slot, so the result (and any sequential reduction over
// it) is bit-identical regardless of the thread count.
template <typename Fn>
void parallel_for_slots(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gibbslab

#endif
