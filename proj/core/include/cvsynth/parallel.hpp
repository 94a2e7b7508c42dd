/* Copyright 2026 The cvsynth Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <functional>
#include <limits>

namespace cvsynth {

/// Worker count used when a caller passes 0. Initialized from the
/// CVSYNTH_WORKERS environment variable, falling back to the hardware
/// concurrency.
std::size_t default_workers();
void set_default_workers(std::size_t workers);

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

/// Calls body(begin, end, worker) over disjoint chunks covering [0, n).
void parallel_chunks(std::size_t n, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Smallest i in [0, n) with pred(i) true, or kNoIndex. The answer does not
/// depend on the worker count; chunks past the current best are skipped.
std::size_t parallel_find_first(std::size_t n, std::size_t workers,
                                const std::function<bool(std::size_t)>& pred);

}  // namespace cvsynth
