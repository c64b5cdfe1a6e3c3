// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qils {

/// Splits [0, count) into a fixed number of chunks and processes them on up to
/// `threads` workers. The chunk grid is independent of the thread count, so
/// per-chunk partial results can be combined in chunk order to give results
/// that do not depend on the partitioning.
template <typename Fn>
void parallel_chunks(std::size_t count, int threads, Fn&& fn,
                     std::size_t chunk_grid = 64) {
  if (count == 0) return;
  const std::size_t chunks = std::min(chunk_grid, count);
  const std::size_t per = (count + chunks - 1) / chunks;
  auto run_chunk = [&](std::size_t c) {
    const std::size_t lo = c * per;
    const std::size_t hi = std::min(count, lo + per);
    if (lo < hi) fn(c, lo, hi);
  };
  if (threads <= 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1))
      run_chunk(c);
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<int>(threads, static_cast<int>(chunks));
  pool.reserve(static_cast<std::size_t>(nthreads) - 1);
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

/// Runs fn(i) for i in [0, count) on a small worker pool. Used for
/// independent trials; each i owns its own state and writes its own slot.
template <typename Fn>
void parallel_for_each_index(std::size_t count, int threads, Fn&& fn) {
  if (count == 0) return;
  if (threads <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
      fn(i);
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<int>(threads, static_cast<int>(count));
  pool.reserve(static_cast<std::size_t>(nthreads) - 1);
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

inline int default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace qils
