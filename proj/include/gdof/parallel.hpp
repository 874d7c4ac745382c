// SPDX-License-Identifier: Apache-2.0
//
// gdof-lab: GDoF laboratory for the MISO broadcast channel with partial CSIT
// Copyright (C) 2026 The gdof-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef GDOF_PARALLEL_HPP
#define GDOF_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace gdof {

// Worker count: GDOF_LAB_THREADS when set (>= 1), otherwise the hardware
// concurrency. Never less than 1.
unsigned worker_count();

// Calls body(i) for i in [0, n) on up to `workers` threads. Each index is
// visited exactly once; callers write results into per-index slots and reduce
// afterwards in index order, which keeps output independent of the worker
// count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers = 0);

} // namespace gdof

#endif
