// Copyright 2026 The mtrobust Authors.
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

#ifndef MTROBUST_PARALLEL_H_
#define MTROBUST_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace mtrobust {

// Runs fn(i) for every i in [0, n) on up to `jobs` threads. Work items are
// handed out in contiguous blocks; callers write results into per-index
// slots so the outcome never depends on scheduling. The first exception
// thrown by any worker is rethrown on the calling thread.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

}  // namespace mtrobust

#endif  // MTROBUST_PARALLEL_H_
