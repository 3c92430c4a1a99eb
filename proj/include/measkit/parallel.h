// Copyright 2026 The measkit Authors.
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

#ifndef MEASKIT_PARALLEL_H_
#define MEASKIT_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace measkit {

// Calls fn(i) for every i in [0, n) on up to `jobs` threads. Work is handed
// out in contiguous chunks; callers write results into slot i, so output
// order never depends on scheduling. The first exception thrown by any call
// is rethrown after all threads have joined.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn);

// Number of hardware threads, at least 1.
int default_jobs();

}  // namespace measkit

#endif  // MEASKIT_PARALLEL_H_
