// Copyright 2026 The topicsim Authors
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

#ifndef TOPICSIM_PARALLEL_H_
#define TOPICSIM_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace topicsim {

// Worker count from the TOPICSIM_WORKERS environment variable, defaulting to
// the machine parallelism. Always at least 1.
int WorkerCount();

// Runs fn(i) for every i in [0, n). Work items must be independent; they are
// pulled from a shared counter, so callers that need deterministic output
// must write results into per-index slots. Nested calls run inline on the
// calling worker.
void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& fn);

inline void ParallelFor(std::size_t n,
                        const std::function<void(std::size_t)>& fn) {
  ParallelFor(n, WorkerCount(), fn);
}

}  // namespace topicsim

#endif  // TOPICSIM_PARALLEL_H_
