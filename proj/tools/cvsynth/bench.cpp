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

#include "bench.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "cvsynth/ccsearch.hpp"
#include "cvsynth/controlled.hpp"
#include "cvsynth/error.hpp"
#include "cvsynth/gateset.hpp"

namespace cvsynth::cli {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Block k of a controlled target with seed s.
UMat block(std::uint64_t s, int k) { return haar_random(2, s * 8 + static_cast<std::uint64_t>(k)); }

}  // namespace

const std::vector<std::string>& bench_methods() {
    static const std::vector<std::string> m{"mitm", "cc", "controlled-narrow", "controlled", "controlled-n3", "mitm-su4"};
    return m;
}

std::string target_class(const std::string& method) {
    if (method == "mitm" || method == "cc") return "haar_su2";
    if (method == "controlled-narrow") return "haar_su2_narrow";
    if (method == "controlled") return "haar_su2_pair";
    if (method == "controlled-n3") return "haar_su2_quad";
    if (method == "mitm-su4") return "haar_su4";
    throw ValidationError("unknown bench method '" + method + "'");
}

struct BenchRunner::Impl {
    BenchConfig cfg;
    std::unique_ptr<MitmSearcher> mitm;
    std::unique_ptr<CcSearcher> cc;
    std::unique_ptr<ControlledSynthesizer> ctl;

    BenchRow blank(std::uint64_t seed, double eps) const {
        BenchRow row;
        row.method = cfg.method;
        row.target_class = target_class(cfg.method);
        row.seed = seed;
        row.epsilon = eps;
        return row;
    }

    MitmSearcher& mitm_searcher() {
        if (!mitm) mitm = std::make_unique<MitmSearcher>(vbasis(cfg.method == "mitm-su4" ? 2 : 1), cfg.limits);
        return *mitm;
    }
    CcSearcher& cc_searcher() {
        if (!cc) cc = std::make_unique<CcSearcher>(CcOptions{cfg.limits});
        return *cc;
    }
    ControlledSynthesizer& controlled() {
        if (!ctl) {
            ControlledOptions opt;
            opt.limits = cfg.limits;
            ctl = std::make_unique<ControlledSynthesizer>(opt);
        }
        return *ctl;
    }
};

BenchRunner::BenchRunner(BenchConfig cfg) : impl_(std::make_unique<Impl>()) {
    target_class(cfg.method);
    if (cfg.eps_grid.empty() == cfg.vcount_grid.empty()) throw ValidationError("give exactly one of the two grids");
    if (cfg.num_targets < 1) throw ValidationError("num_targets must be positive");
    for (double e : cfg.eps_grid) {
        if (!(e >= Tolerances::epsilon_floor && e < 1.0)) throw ValidationError("epsilon grid values must lie in [1e-9, 1)");
    }
    for (int v : cfg.vcount_grid) {
        if (v < 0 || v > 40) throw ValidationError("vcount grid values must lie in [0, 40]");
    }
    if (!cfg.vcount_grid.empty() && cfg.method != "mitm" && cfg.method != "cc" && cfg.method != "mitm-su4") {
        throw ValidationError("fixed-vcount sweeps support mitm, cc and mitm-su4");
    }
    const std::size_t work = static_cast<std::size_t>(cfg.num_targets) * (cfg.eps_grid.size() + cfg.vcount_grid.size());
    if (work > 20000) throw ValidationError("bench too large for one run (targets x grid > 20000)");
    impl_->cfg = std::move(cfg);
}

BenchRunner::~BenchRunner() = default;

BenchRow BenchRunner::run_one(std::uint64_t seed, double eps) {
    Impl& im = *impl_;
    BenchRow row = im.blank(seed, eps);
    const auto t0 = std::chrono::steady_clock::now();
    const std::string& m = im.cfg.method;
    if (m == "mitm" || m == "mitm-su4") {
        const SynthResult r = im.mitm_searcher().search(haar_random(m == "mitm" ? 2 : 4, seed), eps);
        row.ok = r.status == SynthStatus::ok;
        row.vcount = r.vcount;
        row.achieved_error = r.error;
        row.nodes_expanded = r.nodes_expanded;
    } else if (m == "cc") {
        const CcResult r = im.cc_searcher().search(haar_random(2, seed), eps);
        row.ok = r.status == SynthStatus::ok;
        row.vcount = r.vcount();
        row.achieved_error = r.error;
        row.nodes_expanded = r.nodes_expanded;
    } else {
        ControlledCircuit c;
        if (m == "controlled-narrow") {
            c = im.controlled().synth_2q(identity(2), haar_random(2, seed), eps);
        } else if (m == "controlled") {
            c = im.controlled().synth_2q(block(seed, 0), block(seed, 1), eps);
        } else {
            c = im.controlled().synth(GeneralizedControlled::make(3, {block(seed, 0), block(seed, 1), block(seed, 2), block(seed, 3)}),
                                      eps);
        }
        row.ok = c.status == SynthStatus::ok;
        row.vcount = c.vcount;
        row.achieved_error = row.ok ? c.error : 1.0;
        row.nodes_expanded = c.nodes_expanded;
    }
    row.elapsed_s = im.cfg.deterministic ? 0.0 : seconds_since(t0);
    return row;
}

BenchRow BenchRunner::run_one_fixed(std::uint64_t seed, int vcount) {
    Impl& im = *impl_;
    BenchRow row = im.blank(seed, std::numeric_limits<double>::quiet_NaN());
    const auto t0 = std::chrono::steady_clock::now();
    if (im.cfg.method == "cc") {
        const CcResult r = im.cc_searcher().min_error(haar_random(2, seed), vcount);
        row.ok = r.status == SynthStatus::ok;
        row.vcount = r.vcount();
        row.achieved_error = r.error;
        row.nodes_expanded = r.nodes_expanded;
    } else {
        const SynthResult r = im.mitm_searcher().min_error(haar_random(im.cfg.method == "mitm" ? 2 : 4, seed), vcount);
        row.ok = r.status == SynthStatus::ok;
        row.vcount = r.vcount;
        row.achieved_error = r.error;
        row.nodes_expanded = r.nodes_expanded;
    }
    row.elapsed_s = im.cfg.deterministic ? 0.0 : seconds_since(t0);
    return row;
}

void BenchRunner::run(const std::function<void(const BenchRow&)>& sink) {
    const BenchConfig& cfg = impl_->cfg;
    for (int t = 0; t < cfg.num_targets; ++t) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(t);
        for (double e : cfg.eps_grid) sink(run_one(seed, e));
        for (int v : cfg.vcount_grid) sink(run_one_fixed(seed, v));
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string csv_row(const BenchRow& r) {
    std::string s;
    s += r.method + ',' + r.target_class + ',' + std::to_string(r.seed) + ',' + format_double(r.epsilon) + ',';
    s += std::to_string(r.vcount) + ',' + format_double(r.achieved_error) + ',' + format_double(r.elapsed_s) + ',';
    s += std::to_string(r.nodes_expanded);
    return s;
}

Fit ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("ols needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("ols needs distinct x values");
    Fit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
    f.n = static_cast<int>(x.size());
    return f;
}

Fit vcount_fit(const std::vector<BenchRow>& rows, double base) {
    std::map<double, std::pair<double, int>> by_eps;
    for (const auto& r : rows) {
        if (!r.ok || std::isnan(r.epsilon)) continue;
        auto& [sum, count] = by_eps[r.epsilon];
        sum += r.vcount;
        ++count;
    }
    std::vector<double> x, y;
    for (const auto& [eps, sc] : by_eps) {
        x.push_back(std::log(1.0 / eps) / std::log(base));
        y.push_back(sc.first / sc.second);
    }
    return ols(x, y);
}

}  // namespace cvsynth::cli
