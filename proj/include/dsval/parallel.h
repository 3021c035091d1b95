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

#ifndef DSVAL_PARALLEL_H_
#define DSVAL_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace dsval {

// Process-wide cap on worker threads. 0 or negative resets to 1.
void SetMaxThreads(int threads);
int MaxThreads();

// Runs fn(i) for every i in [0, n). Work is split into contiguous blocks over
// at most MaxThreads() threads. Callers write results into per-index slots and
// reduce afterwards in index order, which keeps outputs independent of the
// thread count. The first exception thrown by any fn(i) is rethrown here.
// Calls made from inside a worker run serially.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace dsval

#endif  // DSVAL_PARALLEL_H_
