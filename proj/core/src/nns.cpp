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

#include "cvsynth/nns.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "cvsynth/error.hpp"

namespace cvsynth {

namespace {

constexpr std::size_t kLeaf = 8;
constexpr int kMaxDim = 256;
// Slack on the box lower bound; keeps pruning conservative under rounding.
constexpr double kPruneSlack = 1.0 + 1e-12;

template <int D>
inline double sq_dist(const double* a, const double* b, int dim) {
    double s = 0.0;
    if constexpr (D > 0) {
        for (int k = 0; k < D; ++k) {
            const double t = a[k] - b[k];
            s += t * t;
        }
    } else {
        for (int k = 0; k < dim; ++k) {
            const double t = a[k] - b[k];
            s += t * t;
        }
    }
    return s;
}

struct Best {
    double sq = std::numeric_limits<double>::infinity();
    std::uint32_t owner = 0;
    bool found = false;

    void offer(double d2, std::uint32_t owner_id) {
        if (d2 < sq || (found && d2 == sq && owner_id < owner)) {
            sq = d2;
            owner = owner_id;
            found = true;
        }
    }
};

inline std::uint32_t owner_at(const double* rec, std::size_t i, int stride) {
    return static_cast<std::uint32_t>(rec[i * static_cast<std::size_t>(stride) + static_cast<std::size_t>(stride - 1)]);
}

// Hoare selection over strided records keyed by one coordinate.
void select_kth(double* rec, int stride, std::size_t lo, std::size_t hi_incl, std::size_t k, int axis) {
    const auto st = static_cast<std::size_t>(stride);
    auto key = [&](std::size_t i) { return rec[i * st + static_cast<std::size_t>(axis)]; };
    auto swap_rec = [&](std::size_t i, std::size_t j) {
        std::swap_ranges(rec + i * st, rec + (i + 1) * st, rec + j * st);
    };
    while (lo < hi_incl) {
        const std::size_t mid = lo + (hi_incl - lo) / 2;
        // Median of three moved to the middle slot.
        if (key(mid) < key(lo)) swap_rec(mid, lo);
        if (key(hi_incl) < key(lo)) swap_rec(hi_incl, lo);
        if (key(hi_incl) < key(mid)) swap_rec(hi_incl, mid);
        const double p = key(mid);
        std::size_t i = lo - 1;
        std::size_t j = hi_incl + 1;
        for (;;) {
            do ++i;
            while (key(i) < p);
            do --j;
            while (key(j) > p);
            if (i >= j) break;
            swap_rec(i, j);
        }
        if (k <= j) {
            hi_incl = j;
        } else {
            lo = j + 1;
        }
    }
}

}  // namespace

double squared_distance(const double* a, const double* b, int dim) {
    return dim == 4 ? sq_dist<4>(a, b, 4) : sq_dist<0>(a, b, dim);
}

void PointBuffer::push(const double* x, std::uint32_t owner_id) {
    rec.insert(rec.end(), x, x + dim);
    rec.push_back(static_cast<double>(owner_id));
}

void PointBuffer::push(const EmbedPoint& p) {
    if (static_cast<int>(p.coords.size()) != dim) {
        throw DimensionMismatch("point has " + std::to_string(p.coords.size()) + " coordinates, index has " +
                                std::to_string(dim));
    }
    push(p.coords.data(), p.owner_id);
}

struct NnIndex::Search {
    const double* q = nullptr;
    Best best;
    QueryStats* stats = nullptr;
    std::array<double, kMaxDim> off{};
};

NnIndex NnIndex::build(PointBuffer points) {
    if (points.dim <= 0 || points.dim > kMaxDim) {
        throw ValidationError("index dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
    if (points.rec.size() % static_cast<std::size_t>(points.stride()) != 0) {
        throw DimensionMismatch("point buffer length is not a multiple of the record size");
    }
    if (points.size() == 0) throw ValidationError("cannot build an index over no points");

    NnIndex idx;
    idx.dim_ = points.dim;
    idx.n_ = points.size();
    idx.rec_ = std::move(points.rec);

    int levels = 0;
    for (std::size_t sz = idx.n_; sz > kLeaf; sz = (sz + 1) / 2) ++levels;
    idx.split_.assign((std::size_t{1} << levels) - 1, 0.0);

    const int stride = idx.dim_ + 1;
    // Explicit stack keeps deep trees off the call stack.
    struct Task {
        std::size_t node, lo, hi;
        int depth;
    };
    std::vector<Task> stack{{0, 0, idx.n_, 0}};
    while (!stack.empty()) {
        const Task t = stack.back();
        stack.pop_back();
        if (t.hi - t.lo <= kLeaf) continue;
        const int axis = t.depth % idx.dim_;
        const std::size_t mid = t.lo + (t.hi - t.lo) / 2;
        select_kth(idx.rec_.data(), stride, t.lo, t.hi - 1, mid, axis);
        idx.split_[t.node] = idx.rec_[mid * static_cast<std::size_t>(stride) + static_cast<std::size_t>(axis)];
        stack.push_back({2 * t.node + 2, mid, t.hi, t.depth + 1});
        stack.push_back({2 * t.node + 1, t.lo, mid, t.depth + 1});
    }
    return idx;
}

NnIndex NnIndex::build(const std::vector<EmbedPoint>& points) {
    if (points.empty()) throw ValidationError("cannot build an index over no points");
    PointBuffer buf(static_cast<int>(points.front().coords.size()));
    buf.reserve(points.size());
    for (const auto& p : points) buf.push(p);
    return build(std::move(buf));
}

template <int D>
void NnIndex::search(Search& s, std::size_t node, std::size_t lo, std::size_t hi, int depth, double rd) const {
    if (s.stats) ++s.stats->nodes_visited;
    const int stride = dim_ + 1;
    if (hi - lo <= kLeaf) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double* p = rec_.data() + i * static_cast<std::size_t>(stride);
            s.best.offer(sq_dist<D>(s.q, p, dim_), owner_at(rec_.data(), i, stride));
        }
        if (s.stats) s.stats->points_checked += hi - lo;
        return;
    }
    const int axis = depth % dim_;
    const std::size_t mid = lo + (hi - lo) / 2;
    const double diff = s.q[axis] - split_[node];
    const bool left_first = diff <= 0.0;
    const std::size_t near = left_first ? 2 * node + 1 : 2 * node + 2;
    const std::size_t far = left_first ? 2 * node + 2 : 2 * node + 1;
    if (left_first) {
        search<D>(s, near, lo, mid, depth + 1, rd);
    } else {
        search<D>(s, near, mid, hi, depth + 1, rd);
    }

    const double old = s.off[static_cast<std::size_t>(axis)];
    const double rd_far = rd - old * old + diff * diff;
    if (rd_far > s.best.sq * kPruneSlack) return;
    s.off[static_cast<std::size_t>(axis)] = diff;
    if (left_first) {
        search<D>(s, far, mid, hi, depth + 1, rd_far);
    } else {
        search<D>(s, far, lo, mid, depth + 1, rd_far);
    }
    s.off[static_cast<std::size_t>(axis)] = old;
}

void NnIndex::run(Search& s) const {
    if (n_ == 0) throw ValidationError("query against an empty index");
    if (dim_ == 4) {
        search<4>(s, 0, 0, n_, 0, 0.0);
    } else {
        search<0>(s, 0, 0, n_, 0, 0.0);
    }
}

NnHit NnIndex::nearest(const double* q, QueryStats* stats) const {
    Search s;
    s.q = q;
    s.stats = stats;
    run(s);
    return {std::sqrt(s.best.sq), s.best.owner};
}

NnHit NnIndex::nearest(const std::vector<double>& q, QueryStats* stats) const {
    if (static_cast<int>(q.size()) != dim_) throw DimensionMismatch("query dimension does not match the index");
    return nearest(q.data(), stats);
}

std::optional<NnHit> NnIndex::nearest_within(const double* q, double radius, QueryStats* stats) const {
    Search s;
    s.q = q;
    s.stats = stats;
    s.best.sq = radius * radius;
    run(s);
    if (!s.best.found) return std::nullopt;
    return NnHit{std::sqrt(s.best.sq), s.best.owner};
}

std::size_t NnIndex::memory_bytes() const {
    return rec_.capacity() * sizeof(double) + split_.capacity() * sizeof(double);
}

std::size_t NnIndex::bytes_per_point(int dim) {
    // Record plus amortized split storage.
    return static_cast<std::size_t>(dim + 1) * sizeof(double) + 2;
}

LinearScanIndex::LinearScanIndex(PointBuffer points) : points_(std::move(points)) {
    if (points_.dim <= 0 || points_.size() == 0) throw ValidationError("cannot build an index over no points");
}

namespace {

Best scan(const PointBuffer& pts, const double* q, Best best, QueryStats* stats) {
    for (std::size_t i = 0; i < pts.size(); ++i) best.offer(squared_distance(q, pts.coords(i), pts.dim), pts.owner(i));
    if (stats) stats->points_checked += pts.size();
    return best;
}

}  // namespace

NnHit LinearScanIndex::nearest(const double* q, QueryStats* stats) const {
    const Best best = scan(points_, q, Best{}, stats);
    return {std::sqrt(best.sq), best.owner};
}

std::optional<NnHit> LinearScanIndex::nearest_within(const double* q, double radius, QueryStats* stats) const {
    Best init;
    init.sq = radius * radius;
    const Best best = scan(points_, q, init, stats);
    if (!best.found) return std::nullopt;
    return NnHit{std::sqrt(best.sq), best.owner};
}

}  // namespace cvsynth
