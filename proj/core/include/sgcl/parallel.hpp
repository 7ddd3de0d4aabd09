// Copyright 2026 The SGCL Authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace sgcl {

// Upper bound on worker threads used by row-parallel kernels. Kernels only
// write disjoint rows, so results do not depend on this value.
void set_num_threads(std::size_t n);
std::size_t num_threads();

// Calls fn(lo, hi) over contiguous chunks covering [begin, end). Runs inline
// when one thread is configured or the range is shorter than min_chunk.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& fn,
                  std::size_t min_chunk = 256);

}  // namespace sgcl
