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

#include "cvsynth/ccsearch.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <tuple>

#include "cvsynth/error.hpp"
#include "cvsynth/nns.hpp"
#include "cvsynth/parallel.hpp"

namespace cvsynth {

namespace {

constexpr std::uint8_t kNoStep = 0xFF;
constexpr std::size_t kSteps = 12;
constexpr double kRadiusSlack = 1.0 + 1e-9;
// Grid for recognizing equal center products.
constexpr double kKeyGrid = 1e11;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct StepTables {
    std::array<Quat, kSteps> left{};
    std::array<Quat, kSteps> right{};
    std::array<std::uint8_t, kSteps> inverse{};
    std::array<std::array<bool, kSteps>, kSteps> commute{};
};

const StepTables& tables() {
    static const StepTables t = [] {
        StepTables s;
        const auto& steps = cc_steps();
        for (std::size_t k = 0; k < kSteps; ++k) {
            s.left[k] = quat_from_matrix(gates::v_matrix(steps[k].axis, -steps[k].i1));
            s.right[k] = quat_from_matrix(gates::v_matrix(steps[k].axis, steps[k].i2));
            s.inverse[k] = static_cast<std::uint8_t>(step_index(steps[k].inverse()));
            for (std::size_t j = 0; j < kSteps; ++j) s.commute[k][j] = steps_commute(steps[k], steps[j]);
        }
        return s;
    }();
    return t;
}

// Adjacent steps x then y (x nearer the center) survive the filter.
bool canonical_pair(std::uint8_t x, std::uint8_t y) { return !(tables().commute[x][y] && x > y); }

using Key = std::array<std::int64_t, 4>;

Key center_key(const Quat& q) {
    const Quat c = q.canonical();
    return {std::llround(c.a * kKeyGrid), std::llround(c.b * kKeyGrid), std::llround(c.c * kKeyGrid),
            std::llround(c.d * kKeyGrid)};
}

std::uint64_t key_hash(const Key& k) {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (std::int64_t v : k) {
        std::uint64_t x = static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBull;
        x ^= x >> 31;
        h ^= x;
    }
    return h;
}

void validate_su2_target(const UMat& target) {
    if (target.rows() != 2 || target.cols() != 2) throw DimensionMismatch("cc_search needs a 2x2 target");
    if (unitarity_residual(target) > Tolerances::validation) throw ValidationError("target is not unitary");
}

}  // namespace

std::size_t step_index(const CcStep& s) {
    const auto& steps = cc_steps();
    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (steps[k] == s) return k;
    }
    throw ValidationError("not a conditionally controlled step: " + s.label());
}

bool steps_commute(const CcStep& a, const CcStep& b) {
    const UMat x = cc_matrix(a);
    const UMat y = cc_matrix(b);
    return (x * y - y * x).norm() < 1e-12;
}

std::string CCWord::text() const {
    std::string out;
    for (const auto& s : steps) {
        if (!out.empty()) out += ' ';
        out += s.label();
    }
    return out;
}

UMat constraint_product(const CCWord& w) {
    UMat k = identity(2);
    for (const auto& s : w.steps) k = gates::v_matrix(s.axis, -s.i1) * k * gates::v_matrix(s.axis, s.i2);
    return k;
}

UMat cc_left_block(const CCWord& w) {
    UMat a = identity(2);
    for (const auto& s : w.steps) a = a * gates::v_matrix(s.axis, s.i1);
    return a;
}

UMat cc_right_block(const CCWord& w) {
    UMat b = identity(2);
    for (const auto& s : w.steps) b = b * gates::v_matrix(s.axis, s.i2);
    return b;
}

UMat assemble_cc(const CCWord& w) {
    UMat m = identity(4);
    for (const auto& s : w.steps) m = m * cc_matrix(s);
    return m;
}

Circuit emit_circuit(const CCWord& w) {
    Circuit c;
    c.name = "cc";
    c.num_qubits = 2;
    for (auto it = w.steps.rbegin(); it != w.steps.rend(); ++it) c.append(emit_cc_template(it->axis, it->i1, it->i2));
    return c;
}

struct CcSearcher::Impl {
    CcOptions opt;
    std::size_t workers;

    // Centers of every depth, concatenated; center 0 is the identity.
    std::vector<Quat> cq{Quat::identity()};
    std::vector<std::uint32_t> cparent{0};
    std::vector<std::uint8_t> cstep{kNoStep};
    std::vector<std::size_t> depth_end{1};
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keys;

    struct PairLevel {
        std::vector<Quat> l;
        std::vector<Quat> r;
        std::vector<std::uint32_t> parent;
        std::vector<std::uint8_t> step;

        std::size_t size() const { return parent.size(); }
    };
    std::vector<PairLevel> pairs;
    std::vector<std::unique_ptr<NnIndex>> trees;

    explicit Impl(CcOptions o) : opt(o), workers(o.limits.workers == 0 ? default_workers() : o.limits.workers) {
        keys.emplace_back(key_hash(center_key(cq[0])), 0);
        PairLevel root;
        root.l = {Quat::identity()};
        root.r = {Quat::identity()};
        root.parent = {0};
        root.step = {kNoStep};
        pairs.push_back(std::move(root));
        trees.resize(1);
    }

    int center_depth() const { return static_cast<int>(depth_end.size()) - 1; }
    std::size_t centers_at(int d) const {
        if (d > center_depth()) return 0;
        return depth_end[static_cast<std::size_t>(d)] - (d == 0 ? 0 : depth_end[static_cast<std::size_t>(d) - 1]);
    }

    std::size_t memory() const {
        std::size_t total = cq.capacity() * sizeof(Quat) + cparent.capacity() * 4 + cstep.capacity() +
                            keys.capacity() * sizeof(keys[0]);
        for (const auto& p : pairs) total += p.l.capacity() * 2 * sizeof(Quat) + p.parent.capacity() * 5;
        for (const auto& t : trees) {
            if (t) total += t->memory_bytes();
        }
        return total;
    }

    bool fits(std::size_t extra, const std::string& what, std::string& why) const {
        if (memory() + extra <= opt.limits.max_memory_bytes) return true;
        why = "memory limit: " + what + " needs " + std::to_string(extra >> 20) + " MiB";
        return false;
    }

    std::uint8_t outer_step(std::size_t center) const { return cstep[center]; }

    bool grow_centers(std::string& why) {
        const int d = center_depth();
        const std::size_t begin = d == 0 ? 0 : depth_end[static_cast<std::size_t>(d) - 1];
        const std::size_t end = depth_end[static_cast<std::size_t>(d)];
        const std::size_t ncand = (end - begin) * kSteps;
        if (!fits(ncand * (sizeof(Quat) + 32), "center depth " + std::to_string(d + 1), why)) return false;
        const auto& t = tables();

        std::vector<Quat> q;
        std::vector<std::uint32_t> parent;
        std::vector<std::uint8_t> step;
        q.reserve(ncand);
        parent.reserve(ncand);
        step.reserve(ncand);
        for (std::size_t e = begin; e < end; ++e) {
            const std::uint8_t prev = cstep[e];
            for (std::uint8_t s = 0; s < kSteps; ++s) {
                if (prev != kNoStep && (t.inverse[prev] == s)) continue;
                if (opt.commutation_filter && prev != kNoStep && !canonical_pair(prev, s)) continue;
                q.push_back(t.left[s] * cq[e] * t.right[s]);
                parent.push_back(static_cast<std::uint32_t>(e));
                step.push_back(s);
            }
        }
        std::vector<bool> keep(q.size(), true);
        if (opt.dedup_centers) {
            std::vector<std::pair<std::uint64_t, std::uint32_t>> cand(q.size());
            parallel_chunks(q.size(), workers, [&](std::size_t b, std::size_t e, std::size_t) {
                for (std::size_t k = b; k < e; ++k) cand[k] = {key_hash(center_key(q[k])), static_cast<std::uint32_t>(k)};
            });
            std::sort(cand.begin(), cand.end());
            for (std::size_t g = 0; g < cand.size();) {
                std::size_t h = g;
                while (h < cand.size() && cand[h].first == cand[g].first) ++h;
                // Earlier retained centers with this hash, then earlier candidates.
                std::vector<Key> seen;
                auto [lo, hi] = std::equal_range(keys.begin(), keys.end(), std::make_pair(cand[g].first, std::uint32_t{0}),
                                                 [](const auto& a, const auto& b) { return a.first < b.first; });
                for (auto it = lo; it != hi; ++it) seen.push_back(center_key(cq[it->second]));
                for (std::size_t k = g; k < h; ++k) {
                    const Key key = center_key(q[cand[k].second]);
                    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
                        keep[cand[k].second] = false;
                    } else {
                        seen.push_back(key);
                    }
                }
                g = h;
            }
        }
        std::vector<std::pair<std::uint64_t, std::uint32_t>> added;
        for (std::size_t k = 0; k < q.size(); ++k) {
            if (!keep[k]) continue;
            if (cq.size() >= std::numeric_limits<std::uint32_t>::max()) throw UnsupportedError("too many centers");
            const auto idx = static_cast<std::uint32_t>(cq.size());
            cq.push_back(q[k]);
            cparent.push_back(parent[k]);
            cstep.push_back(step[k]);
            if (opt.dedup_centers) added.emplace_back(key_hash(center_key(q[k])), idx);
        }
        depth_end.push_back(cq.size());
        if (opt.dedup_centers) {
            std::sort(added.begin(), added.end());
            const std::size_t mid = keys.size();
            keys.insert(keys.end(), added.begin(), added.end());
            std::inplace_merge(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(mid), keys.end());
        }
        return true;
    }

    // Child s of pair p at level lv; false when pruned.
    bool pair_child(const PairLevel& lv, std::size_t p, std::uint8_t s, Quat& l, Quat& r) const {
        const auto& t = tables();
        const std::uint8_t prev = lv.step[p];
        if (prev != kNoStep && t.inverse[prev] == s) return false;
        if (opt.commutation_filter && prev != kNoStep && !canonical_pair(s, prev)) return false;
        l = lv.l[p] * t.left[s];
        r = t.right[s] * lv.r[p];
        return true;
    }

    bool grow_pairs(std::string& why) {
        const PairLevel& top = pairs.back();
        if (!fits(top.size() * kSteps * (2 * sizeof(Quat) + 5), "pair depth " + std::to_string(pairs.size()), why)) {
            return false;
        }
        PairLevel next;
        for (std::size_t p = 0; p < top.size(); ++p) {
            for (std::uint8_t s = 0; s < kSteps; ++s) {
                Quat l;
                Quat r;
                if (!pair_child(top, p, s, l, r)) continue;
                next.l.push_back(l);
                next.r.push_back(r);
                next.parent.push_back(static_cast<std::uint32_t>(p));
                next.step.push_back(s);
            }
        }
        if (next.size() >= std::numeric_limits<std::uint32_t>::max()) throw UnsupportedError("too many pairs");
        pairs.push_back(std::move(next));
        return true;
    }

    bool ensure_round(int i, std::string& why) {
        while (center_depth() < i) {
            if (!grow_centers(why)) return false;
        }
        while (static_cast<int>(pairs.size()) < i) {
            if (!grow_pairs(why)) return false;
        }
        if (static_cast<int>(trees.size()) <= i) trees.resize(static_cast<std::size_t>(i) + 1);
        auto& tree = trees[static_cast<std::size_t>(i)];
        if (tree) return true;
        const std::size_t n = depth_end[static_cast<std::size_t>(i)];
        if (!fits(2 * n * NnIndex::bytes_per_point(4), "round " + std::to_string(i) + " index", why)) return false;
        PointBuffer buf(4);
        buf.rec.resize(2 * n * 5);
        parallel_chunks(n, workers, [&](std::size_t b, std::size_t e, std::size_t) {
            for (std::size_t k = b; k < e; ++k) {
                const auto c = cq[k].coords();
                double* out = buf.rec.data() + 2 * k * 5;
                for (int j = 0; j < 4; ++j) {
                    out[j] = c[static_cast<std::size_t>(j)];
                    out[5 + j] = -c[static_cast<std::size_t>(j)];
                }
                out[4] = out[9] = static_cast<double>(k);
            }
        });
        tree = std::make_unique<NnIndex>(NnIndex::build(std::move(buf)));
        return true;
    }

    // Steps 1..c of a center.
    std::vector<CcStep> center_steps(std::size_t c) const {
        std::vector<CcStep> out;
        while (c != 0) {
            out.push_back(cc_steps()[cstep[c]]);
            c = cparent[c];
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    // Pair steps innermost first, starting from an optional fresh inner step.
    std::vector<CcStep> pair_steps(int depth, std::size_t p, std::uint8_t inner) const {
        std::vector<CcStep> out;
        if (inner != kNoStep) out.push_back(cc_steps()[inner]);
        for (int d = depth; d >= 1; --d) {
            const auto& lv = pairs[static_cast<std::size_t>(d)];
            out.push_back(cc_steps()[lv.step[p]]);
            p = lv.parent[p];
        }
        return out;
    }

    struct Best {
        double e = std::numeric_limits<double>::infinity();
        int round = 0;
        int pass = 0;
        std::size_t a = 0;
        std::uint32_t owner = 0;
        bool any = false;

        bool before(const Best& o) const {
            return std::tie(e, round, pass, a) < std::tie(o.e, o.round, o.pass, o.a);
        }
    };

    CCWord assemble(const Best& b) const {
        CCWord w;
        if (b.round == 0) return w;
        w.steps = center_steps(b.owner);
        const int depth = b.round - 1;
        const auto extra = b.pass == 0 ? pair_steps(depth, b.a, kNoStep)
                                       : pair_steps(depth, b.a / kSteps, static_cast<std::uint8_t>(b.a % kSteps));
        w.steps.insert(w.steps.end(), extra.begin(), extra.end());
        // Best-so-far candidates may straddle a cancelling junction.
        std::vector<CcStep> reduced;
        for (const auto& s : w.steps) {
            if (!reduced.empty() && reduced.back().inverse() == s) {
                reduced.pop_back();
            } else {
                reduced.push_back(s);
            }
        }
        w.steps = std::move(reduced);
        return w;
    }

    CcResult finish(CcResult r, const UMat& target, CCWord w, SynthStatus status,
                    std::chrono::steady_clock::time_point t0) const {
        r.status = status;
        r.error = dist_phase_invariant(target, constraint_product(w));
        r.word = std::move(w);
        r.elapsed_s = seconds_since(t0);
        return r;
    }

    CcResult run(const UMat& target, double eps, int max_len, bool accept) {
        const auto t0 = std::chrono::steady_clock::now();
        validate_su2_target(target);
        const Quat t = quat_from_matrix(target);
        const double r_accept = accept ? std::sqrt(2.0) * eps * kRadiusSlack : 0.0;

        CcResult result;
        result.epsilon = eps;
        std::mutex mu;
        Best best;
        std::atomic<double> best_e{std::numeric_limits<double>::infinity()};
        auto offer = [&](const Best& cand) {
            if (cand.e > best_e.load(std::memory_order_relaxed)) return;
            std::lock_guard lock(mu);
            if (!best.any || cand.before(best)) {
                best = cand;
                best.any = true;
                best_e.store(cand.e);
            }
        };
        auto partial = [&](SynthStatus status, std::string why) {
            result.message = std::move(why);
            if (!best.any) {
                result.status = status;
                result.elapsed_s = seconds_since(t0);
                return result;
            }
            return finish(result, target, assemble(best), status, t0);
        };

        ++result.nodes_expanded;
        const double e0 = std::sqrt(2.0) * dist_phase_invariant(t, Quat::identity());
        offer(Best{e0, 0, 0, 0, 0, true});
        if (accept && dist_phase_invariant(t, Quat::identity()) < eps) return finish(result, target, {}, SynthStatus::ok, t0);

        const auto& tab = tables();
        for (int i = 1; 2 * i - 1 <= max_len; ++i) {
            std::string why;
            if (!ensure_round(i, why)) return partial(SynthStatus::limit_exceeded, why);
            const NnIndex& tree = *trees[static_cast<std::size_t>(i)];
            const PairLevel& lv = pairs[static_cast<std::size_t>(i) - 1];

            // Query L_l^dagger T L_r^dagger; accept after the exact recheck.
            auto probe = [&](const Quat& l, const Quat& r, std::uint8_t inner, int pass, std::size_t a, double radius,
                             std::uint32_t* owner) {
                const Quat q = l.conj() * t * r.conj();
                const double qv[4] = {q.a, q.b, q.c, q.d};
                const auto h = tree.nearest_within(qv, radius);
                if (!h) return false;
                offer(Best{h->distance, i, pass, a, h->owner_id, true});
                if (owner) *owner = h->owner_id;
                if (!(h->distance < r_accept)) return false;
                const std::uint8_t outer = outer_step(h->owner_id);
                if (inner != kNoStep && outer != kNoStep && tab.inverse[outer] == inner) return false;
                return dist_phase_invariant(l * cq[h->owner_id] * r, t) < eps;
            };
            auto radius_now = [&] { return std::max(r_accept, best_e.load(std::memory_order_relaxed) * (1.0 + 1e-12)); };

            // Odd lengths: stored pairs of depth i - 1.
            {
                const std::size_t hit = parallel_find_first(lv.size(), workers, [&](std::size_t p) {
                    return probe(lv.l[p], lv.r[p], lv.step[p], 0, p, radius_now(), nullptr);
                });
                if (hit != kNoIndex) {
                    result.nodes_expanded += hit + 1;
                    std::uint32_t owner = 0;
                    probe(lv.l[hit], lv.r[hit], lv.step[hit], 0, hit, r_accept, &owner);
                    return finish(result, target, assemble(Best{0.0, i, 0, hit, owner, true}), SynthStatus::ok, t0);
                }
                result.nodes_expanded += lv.size();
            }
            if (2 * i > max_len) break;
            // Even lengths: pairs of depth i, generated from depth i - 1.
            {
                auto child_probe = [&](std::size_t a, double radius, std::uint32_t* owner) {
                    Quat l;
                    Quat r;
                    const auto s = static_cast<std::uint8_t>(a % kSteps);
                    if (!pair_child(lv, a / kSteps, s, l, r)) return false;
                    return probe(l, r, s, 1, a, radius, owner);
                };
                auto valid_before = [&](std::size_t end) {
                    std::size_t n = 0;
                    Quat l;
                    Quat r;
                    for (std::size_t a = 0; a < end; ++a) {
                        if (pair_child(lv, a / kSteps, static_cast<std::uint8_t>(a % kSteps), l, r)) ++n;
                    }
                    return n;
                };
                const std::size_t total = lv.size() * kSteps;
                const std::size_t hit = parallel_find_first(
                    total, workers, [&](std::size_t a) { return child_probe(a, radius_now(), nullptr); });
                if (hit != kNoIndex) {
                    result.nodes_expanded += valid_before(hit + 1);
                    std::uint32_t owner = 0;
                    child_probe(hit, r_accept, &owner);
                    return finish(result, target, assemble(Best{0.0, i, 1, hit, owner, true}), SynthStatus::ok, t0);
                }
                result.nodes_expanded += valid_before(total);
            }
        }
        if (!accept) return partial(SynthStatus::ok, "");
        return partial(SynthStatus::limit_exceeded, "no word with at most " + std::to_string(max_len) + " steps");
    }
};

CcSearcher::CcSearcher(CcOptions options) : impl_(std::make_unique<Impl>(options)) {}
CcSearcher::~CcSearcher() = default;
CcSearcher::CcSearcher(CcSearcher&&) noexcept = default;
CcSearcher& CcSearcher::operator=(CcSearcher&&) noexcept = default;

CcResult CcSearcher::search(const UMat& target, double eps) {
    if (!(eps > Tolerances::epsilon_floor)) throw ValidationError("epsilon must exceed 1e-9");
    return impl_->run(target, eps, impl_->opt.resolved_max_length(), true);
}

CcResult CcSearcher::min_error(const UMat& target, int max_length) {
    if (max_length < 0) throw ValidationError("length must be nonnegative");
    return impl_->run(target, 0.0, max_length, false);
}

const CcOptions& CcSearcher::options() const { return impl_->opt; }
std::size_t CcSearcher::centers_at(int depth) const { return impl_->centers_at(depth); }

std::size_t CcSearcher::pairs_at(int depth) const {
    const auto d = static_cast<std::size_t>(depth);
    return d < impl_->pairs.size() ? impl_->pairs[d].size() : 0;
}

std::size_t CcSearcher::memory_bytes() const { return impl_->memory(); }

CcResult cc_search(const UMat& target, double eps, const CcOptions& options) {
    return CcSearcher(options).search(target, eps);
}

CcResult cc_brute_force(const UMat& target, double eps, int max_k) {
    const auto t0 = std::chrono::steady_clock::now();
    validate_su2_target(target);
    if (!(eps > Tolerances::epsilon_floor)) throw ValidationError("epsilon must exceed 1e-9");
    if (max_k < 0 || max_k > 6) throw ValidationError("cc_brute_force supports 0 <= max_k <= 6");
    const auto& steps = cc_steps();
    std::vector<UMat> left;
    std::vector<UMat> right;
    std::vector<std::size_t> inv;
    for (const auto& s : steps) {
        left.push_back(gates::v_matrix(s.axis, -s.i1));
        right.push_back(gates::v_matrix(s.axis, s.i2));
        inv.push_back(step_index(s.inverse()));
    }

    CcResult r;
    r.epsilon = eps;
    std::vector<std::size_t> word;
    // Depth-first over step 1, 2, ... in cc_steps() order.
    auto dfs = [&](auto&& self, const UMat& k, int remaining) -> bool {
        if (remaining == 0) {
            ++r.nodes_expanded;
            return dist_phase_invariant(target, k) < eps;
        }
        for (std::size_t s = 0; s < steps.size(); ++s) {
            if (!word.empty() && inv[word.back()] == s) continue;
            word.push_back(s);
            if (self(self, UMat(left[s] * k * right[s]), remaining - 1)) return true;
            word.pop_back();
        }
        return false;
    };
    for (int len = 0; len <= max_k; ++len) {
        word.clear();
        if (dfs(dfs, identity(2), len)) {
            r.status = SynthStatus::ok;
            for (std::size_t s : word) r.word.steps.push_back(steps[s]);
            r.error = dist_phase_invariant(target, constraint_product(r.word));
            r.elapsed_s = seconds_since(t0);
            return r;
        }
    }
    r.status = SynthStatus::not_found;
    r.message = "no word with at most " + std::to_string(max_k) + " steps";
    r.elapsed_s = seconds_since(t0);
    return r;
}

}  // namespace cvsynth
