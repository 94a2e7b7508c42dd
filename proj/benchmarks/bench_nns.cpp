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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "cvsynth/nns.hpp"

using namespace cvsynth;

namespace {

PointBuffer unit_points(int dim, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    PointBuffer b(dim);
    b.reserve(n);
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (auto& v : x) {
            v = g(rng);
            s += v * v;
        }
        for (auto& v : x) v /= std::sqrt(s);
        b.push(x.data(), static_cast<std::uint32_t>(i));
    }
    return b;
}

void BM_KdBuild(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const PointBuffer pts = unit_points(dim, static_cast<std::size_t>(state.range(1)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(NnIndex::build(pts));
    state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_KdBuild)->Args({4, 1 << 16})->Args({4, 1 << 20})->Args({32, 1 << 16})->Unit(benchmark::kMillisecond);

void BM_KdQuery(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const NnIndex idx = NnIndex::build(unit_points(dim, static_cast<std::size_t>(state.range(1)), 1));
    const PointBuffer qs = unit_points(dim, 4096, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(idx.nearest(qs.coords(i)));
        i = (i + 1) % qs.size();
    }
}
BENCHMARK(BM_KdQuery)->Args({4, 1 << 16})->Args({4, 1 << 20})->Args({32, 1 << 16});

void BM_LinearQuery(benchmark::State& state) {
    const LinearScanIndex idx(unit_points(4, static_cast<std::size_t>(state.range(0)), 1));
    const PointBuffer qs = unit_points(4, 4096, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(idx.nearest(qs.coords(i)));
        i = (i + 1) % qs.size();
    }
}
BENCHMARK(BM_LinearQuery)->Arg(1 << 16);

}  // namespace
