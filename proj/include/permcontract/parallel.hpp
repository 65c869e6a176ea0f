#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace permcontract {

namespace detail {
inline std::atomic<unsigned>& thread_override() {
  static std::atomic<unsigned> n{0};
  return n;
}
}  // namespace detail

/// Cap on worker threads; 0 restores the default (PERMCONTRACT_THREADS, then
/// the hardware concurrency).
inline void set_thread_count(unsigned n) { detail::thread_override() = n; }

inline unsigned thread_count() {
  if (unsigned n = detail::thread_override(); n > 0) return n;
  if (const char* env = std::getenv("PERMCONTRACT_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(worker, begin, end) over [0, n) in blocks claimed dynamically.
/// Callers merge per-worker results in a fixed order, so output does not
/// depend on scheduling.
template <typename Body>
void parallel_blocks(std::size_t n, std::size_t block, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || n <= block) {
    for (std::size_t b = 0; b < n; b += block) body(0u, b, std::min(n, b + block));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        std::size_t b = next.fetch_add(block);
        if (b >= n) break;
        body(w, b, std::min(n, b + block));
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace permcontract
