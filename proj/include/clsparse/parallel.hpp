#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace clsparse {

/// Runs `fn(block)` for every block in [0, blocks) on up to `threads`
/// workers. Callers store per-block results in their own slots and reduce
/// them in index order afterwards, so results never depend on scheduling.
template <class Fn>
void parallel_blocks(std::size_t blocks, unsigned threads, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(blocks, std::max(1u, threads));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
          try {
            fn(b);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

inline unsigned default_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace clsparse
