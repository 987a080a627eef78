// Copyright 2026 The freebound Authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace fb {

/// Worker count: set_thread_count() if called, else FB_THREADS, else 1.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(chunk) for chunk in [0, chunks). Chunks are claimed dynamically,
/// so bodies must only write chunk-private state; callers that reduce store
/// one partial per chunk and sum them in chunk order afterwards.
void parallel_for(std::size_t chunks, const std::function<void(std::size_t)>& body);

/// Fixed chunk width used by reductions; independent of the thread count so
/// results are bitwise identical for any FB_THREADS.
inline constexpr std::size_t kReductionChunk = 2048;

inline std::size_t chunk_count(std::size_t items) {
  return (items + kReductionChunk - 1) / kReductionChunk;
}

}  // namespace fb
