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

#include "cvsynth/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cvsynth {

namespace {

std::size_t workers_from_env() {
    if (const char* env = std::getenv("CVSYNTH_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

std::atomic<std::size_t>& worker_setting() {
    static std::atomic<std::size_t> setting{workers_from_env()};
    return setting;
}

constexpr std::size_t kChunk = 4096;

std::size_t resolve(std::size_t workers) { return workers == 0 ? default_workers() : workers; }

}  // namespace

std::size_t default_workers() { return worker_setting().load(); }

void set_default_workers(std::size_t workers) {
    worker_setting().store(workers == 0 ? workers_from_env() : workers);
}

void parallel_chunks(std::size_t n, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    workers = std::min(resolve(workers), (n + kChunk - 1) / kChunk);
    if (workers <= 1) {
        if (n > 0) body(0, n, 0);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&](std::size_t worker) {
        for (;;) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= n) break;
            body(begin, std::min(n, begin + kChunk), worker);
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
}

std::size_t parallel_find_first(std::size_t n, std::size_t workers,
                                const std::function<bool(std::size_t)>& pred) {
    std::atomic<std::size_t> best{kNoIndex};
    parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            if (i >= best.load(std::memory_order_relaxed)) return;
            if (pred(i)) {
                std::size_t cur = best.load();
                while (i < cur && !best.compare_exchange_weak(cur, i)) {
                }
                return;
            }
        }
    });
    return best.load();
}

}  // namespace cvsynth
