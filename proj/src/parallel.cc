// Copyright 2026 The dsval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsval/parallel.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dsval {
namespace {

std::atomic<int> g_max_threads{1};
thread_local bool t_in_parallel = false;

}  // namespace

void SetMaxThreads(int threads) { g_max_threads = std::max(threads, 1); }

int MaxThreads() { return g_max_threads.load(); }

void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(MaxThreads()), n);
  if (workers <= 1 || t_in_parallel) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::exception_ptr error;
  std::mutex error_mutex;
  std::atomic<bool> failed{false};
  auto run_block = [&](std::size_t begin, std::size_t end) {
    const bool outer = t_in_parallel;
    t_in_parallel = true;
    try {
      for (std::size_t i = begin; i < end && !failed; ++i) fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
    t_in_parallel = outer;
  };

  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * block);
    const std::size_t end = std::min(n, begin + block);
    threads.emplace_back(run_block, begin, end);
  }
  run_block(0, std::min(n, block));
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dsval
