#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hyperanf {

// Runs fn(begin, end, worker) over contiguous index chunks dealt from a
// shared cursor. With threads == 1 everything runs inline. fn must write
// only to worker-owned or index-disjoint state.
inline void parallel_chunks(
    std::uint64_t total, unsigned threads, std::uint64_t chunk,
    const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& fn) {
  if (total == 0) return;
  if (chunk == 0) chunk = 1;
  if (threads <= 1) {
    for (std::uint64_t lo = 0; lo < total; lo += chunk)
      fn(lo, std::min(total, lo + chunk), 0);
    return;
  }
  std::atomic<std::uint64_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&](unsigned id) {
    try {
      for (;;) {
        const std::uint64_t lo = cursor.fetch_add(chunk);
        if (lo >= total || failed.load(std::memory_order_relaxed)) break;
        fn(lo, std::min(total, lo + chunk), id);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker, i);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hyperanf
