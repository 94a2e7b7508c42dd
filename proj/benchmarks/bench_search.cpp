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

#include "cvsynth/ccsearch.hpp"
#include "cvsynth/controlled.hpp"
#include "cvsynth/mitm.hpp"

using namespace cvsynth;

namespace {

void BM_FrontierExpand(benchmark::State& state) {
    const GateSet gs = vbasis(1);
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        Frontier f = make_frontier(gs);
        for (int k = 0; k < depth; ++k) f = expand_frontier(std::move(f), gs);
        benchmark::DoNotOptimize(f.levels.back().prod.data());
    }
}
BENCHMARK(BM_FrontierExpand)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

// Warm searcher: caches built on the first target are reused.
void BM_MitmSearch(benchmark::State& state) {
    const double eps = std::pow(10.0, -static_cast<double>(state.range(0)));
    MitmSearcher s(vbasis(1));
    s.search(haar_random(2, 0), eps);
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(s.search(haar_random(2, seed++), eps).vcount);
}
BENCHMARK(BM_MitmSearch)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_CcSearch(benchmark::State& state) {
    const double eps = std::pow(10.0, -static_cast<double>(state.range(0)));
    CcSearcher s;
    s.search(haar_random(2, 0), eps);
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(s.search(haar_random(2, seed++), eps).vcount());
}
BENCHMARK(BM_CcSearch)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Decompose3(benchmark::State& state) {
    const auto g = GeneralizedControlled::make(3, {haar_random(2, 1), haar_random(2, 2), haar_random(2, 3), haar_random(2, 4)});
    for (auto _ : state) benchmark::DoNotOptimize(decompose_generalized(g).residual.data());
}
BENCHMARK(BM_Decompose3);

}  // namespace

BENCHMARK_MAIN();
