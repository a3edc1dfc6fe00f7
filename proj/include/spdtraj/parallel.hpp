#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <algorithm>
#include <thread>
#include <vector>

namespace spdtraj {

// Runs f(0), ..., f(count - 1) on up to `jobs` threads. Each index is handled
// exactly once, so results written per index do not depend on scheduling.
// The exception of the lowest failing index is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t count, std::size_t jobs, F&& f) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::size_t error_index = 0;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error || i < error_index) {
          error = std::current_exception();
          error_index = i;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n = std::min(jobs, count);
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Collects f(i) for each index, in index order.
template <class F>
auto parallel_map(std::size_t count, std::size_t jobs, F&& f) {
  using T = decltype(f(std::size_t{}));
  std::vector<std::optional<T>> slots(count);
  parallel_for(count, jobs, [&](std::size_t i) { slots[i].emplace(f(i)); });
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace spdtraj
