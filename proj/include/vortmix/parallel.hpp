#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vortmix {

// Worker count handed down from the CLI; modules never spawn threads on their own.
struct ParallelContext {
  int workers = 1;

  static int hardware_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
  }
};

// Calls body(index, worker) for index in [0, n) on ctx.workers threads. Work is
// handed out dynamically, so results must be stored by index; any exception is
// rethrown on the caller's thread after all workers stop.
template <typename Body>
void parallel_for(std::size_t n, const ParallelContext& ctx, Body&& body) {
  const int workers = std::max(1, std::min<int>(ctx.workers, static_cast<int>(n)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> stop{false};

  auto run = [&](int worker) {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        body(i, worker);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace vortmix
