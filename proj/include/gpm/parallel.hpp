#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gpm {

// Worker count: GPM_THREADS if set and positive, else hardware concurrency.
inline std::size_t thread_count() {
  if (const char* env = std::getenv("GPM_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Runs body(chunk_index) for chunk_index in [0, n_chunks). Chunks are claimed
// round-robin by worker threads; callers write results per chunk and reduce in
// chunk order, so results never depend on the thread count.
template <class Body>
void parallel_chunks(std::size_t n_chunks, Body&& body) {
  std::size_t workers = std::min(thread_count(), n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) body(c);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < n_chunks; c += workers) body(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Sum of term(i) for i in [0, n) with a fixed chunked summation order.
template <class Term>
double parallel_sum(std::size_t n, Term&& term, std::size_t chunk = 1 << 16) {
  std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(n_chunks, 0.0);
  parallel_chunks(n_chunks, [&](std::size_t c) {
    double s = 0.0;
    std::size_t end = std::min(n, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) s += term(i);
    partial[c] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace gpm
