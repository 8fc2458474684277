#pragma once

#include "uqs/types.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace uqs {

// Runs body(i) for i in [0, count) on up to `workers` threads. The first exception is rethrown.
template <typename F> void parallel_for(Index count, unsigned workers, F &&body)
{
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2) {
    for (Index i = 0; i < count; ++i) { body(i); }
    return;
  }
  std::atomic<Index>  next{0};
  std::exception_ptr  error;
  std::mutex          error_mutex;
  auto                run = [&] {
    for (Index i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) { error = std::current_exception(); }
        next = count;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    auto const n = std::min<Index>(workers, count);
    for (Index t = 0; t < n; ++t) { pool.emplace_back(run); }
  }
  if (error) { std::rethrow_exception(error); }
}

} // namespace uqs
