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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cvsynth/mitm.hpp"

namespace cvsynth::cli {

struct BenchRow {
    std::string method;
    std::string target_class;
    std::uint64_t seed = 0;
    /// NaN for fixed-vcount rows.
    double epsilon = 0.0;
    int vcount = 0;
    double achieved_error = 1.0;
    double elapsed_s = 0.0;
    std::uint64_t nodes_expanded = 0;
    /// Not a CSV column; failed rows have achieved_error >= epsilon.
    bool ok = false;
};

/// mitm, cc, controlled-narrow, controlled, controlled-n3, mitm-su4.
const std::vector<std::string>& bench_methods();
std::string target_class(const std::string& method);

struct BenchConfig {
    std::string method = "mitm";
    /// Exactly one of the two grids is non-empty.
    std::vector<double> eps_grid;
    std::vector<int> vcount_grid;
    int num_targets = 10;
    /// Target t uses seed + t.
    std::uint64_t seed = 1;
    bool deterministic = false;
    Limits limits;
};

/// Row order: target-major, then grid order. Searchers and their caches are
/// shared by all rows of one call.
class BenchRunner {
  public:
    explicit BenchRunner(BenchConfig cfg);
    ~BenchRunner();

    void run(const std::function<void(const BenchRow&)>& sink);
    BenchRow run_one(std::uint64_t seed, double eps);
    BenchRow run_one_fixed(std::uint64_t seed, int vcount);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

inline constexpr const char* kCsvHeader =
    "method,target_class,seed,epsilon,vcount,achieved_error,elapsed_s,nodes_expanded";
/// Shortest round-trip decimal, independent of locale.
std::string format_double(double v);
std::string csv_row(const BenchRow& row);

struct Fit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int n = 0;
};

/// Ordinary least squares y = slope x + intercept.
Fit ols(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of mean vcount of successful rows against log_base(1/eps).
Fit vcount_fit(const std::vector<BenchRow>& rows, double base);

}  // namespace cvsynth::cli
