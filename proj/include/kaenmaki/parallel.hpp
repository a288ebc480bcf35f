#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace kaenmaki {

namespace detail {
inline std::atomic<int>& thread_override() {
  static std::atomic<int> value{0};
  return value;
}
}  // namespace detail

/// Caps worker counts for every parallel section. 0 restores the default
/// (KAENMAKI_THREADS, else hardware concurrency).
inline void set_thread_count(int n) { detail::thread_override().store(std::max(0, n)); }

inline int thread_count() {
  if (int n = detail::thread_override().load(); n > 0) return n;
  if (const char* env = std::getenv("KAENMAKI_THREADS")) {
    try {
      if (int n = std::stoi(env); n > 0) return n;
    } catch (...) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs body(k) for k in [0, n). The partition of work into indices is fixed
/// by the caller, so results never depend on the number of threads.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t k = next++; k < n; k = next++) body(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Pairwise tree reduction in index order; bit-stable for a fixed input.
template <class T, class Op>
T tree_reduce(std::vector<T> values, T identity, Op op) {
  if (values.empty()) return identity;
  while (values.size() > 1) {
    std::vector<T> next;
    next.reserve((values.size() + 1) / 2);
    for (std::size_t k = 0; k + 1 < values.size(); k += 2) next.push_back(op(values[k], values[k + 1]));
    if (values.size() % 2) next.push_back(values.back());
    values = std::move(next);
  }
  return values.front();
}

}  // namespace kaenmaki
