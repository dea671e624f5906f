// Copyright 2026 The permcount Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERMCOUNT_PARALLEL_HPP
#define PERMCOUNT_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace permcount {

/// Work is cut into fixed blocks of this many units regardless of thread
/// count; per-block results are combined in block order.
inline constexpr std::uint64_t kBlockSize = 1024;

/// Worker count from PERMCOUNT_THREADS, else the hardware concurrency.
inline int default_workers() {
  if (const char* env = std::getenv("PERMCOUNT_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) {
        return v;
      }
    } catch (const std::exception&) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs `block(worker_state, begin, end)` over [0, total) in kBlockSize
/// chunks on `workers` threads. `make_state()` builds one mutable state per
/// thread. Returns block results in block order.
template <class MakeState, class Block>
auto run_blocks(std::uint64_t total, int workers, MakeState make_state, Block block) {
  using State = decltype(make_state());
  using Result = decltype(block(std::declval<State&>(), std::uint64_t{}, std::uint64_t{}));
  const std::uint64_t blocks = (total + kBlockSize - 1) / kBlockSize;
  std::vector<Result> results(blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    try {
      State state = make_state();
      for (std::uint64_t b = next++; b < blocks; b = next++) {
        const std::uint64_t begin = b * kBlockSize;
        results[b] = block(state, begin, std::min(total, begin + kBlockSize));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) {
        failure = std::current_exception();
      }
      next = blocks;
    }
  };

  const auto threads = static_cast<std::uint64_t>(std::max(1, workers));
  if (threads == 1 || blocks <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t t = 0; t < std::min(threads, blocks); ++t) {
      pool.emplace_back(work);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return results;
}

}  // namespace permcount

#endif  // PERMCOUNT_PARALLEL_HPP
