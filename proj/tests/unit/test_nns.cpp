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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cvsynth/error.hpp"
#include "cvsynth/gateset.hpp"
#include "cvsynth/nns.hpp"

using namespace cvsynth;

namespace {

// Test-side scan with an independent summation, ties to the smaller id.
NnHit scan(const PointBuffer& pts, const double* q) {
    NnHit best{1e300, 0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double s = 0;
        for (int k = 0; k < pts.dim; ++k) {
            const double t = pts.coords(i)[k] - q[k];
            s += t * t;
        }
        const double d = std::sqrt(s);
        if (d < best.distance || (d == best.distance && pts.owner(i) < best.owner_id)) best = {d, pts.owner(i)};
    }
    return best;
}

PointBuffer random_points(int dim, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    PointBuffer b(dim);
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : x) v = g(rng);
        b.push(x.data(), static_cast<std::uint32_t>(i));
    }
    return b;
}

}  // namespace

TEST(KdTree, MatchesScanOnRandomPoints) {
    for (int dim : {4, 8, 32}) {
        const PointBuffer pts = random_points(dim, 10000, static_cast<std::uint64_t>(dim));
        const NnIndex idx = NnIndex::build(pts);
        ASSERT_EQ(idx.size(), 10000u);
        const PointBuffer qs = random_points(dim, 1000, 999);
        for (std::size_t i = 0; i < qs.size(); ++i) {
            const NnHit want = scan(pts, qs.coords(i));
            const NnHit got = idx.nearest(qs.coords(i));
            EXPECT_EQ(got.owner_id, want.owner_id);
            EXPECT_NEAR(got.distance, want.distance, 1e-12);
        }
    }
}

// Integer grid: many exact ties, so the tie rule is exercised.
TEST(KdTree, AdversarialGrid) {
    PointBuffer pts(3);
    std::uint32_t id = 0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b)
            for (int c = 0; c < 10; ++c) {
                const double x[3] = {double(a), double(b), double(c)};
                pts.push(x, id++);
            }
    const NnIndex idx = NnIndex::build(pts);
    const LinearScanIndex lin(pts);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> u(-2, 22);
    for (int i = 0; i < 10000; ++i) {
        const double q[3] = {u(rng) / 2.0, u(rng) / 2.0, u(rng) / 2.0};
        const NnHit want = scan(pts, q);
        EXPECT_EQ(idx.nearest(q).owner_id, want.owner_id);
        EXPECT_EQ(lin.nearest(q).owner_id, want.owner_id);
        EXPECT_NEAR(idx.nearest(q).distance, want.distance, 1e-12);
    }
}

TEST(KdTree, NearestWithin) {
    const PointBuffer pts = random_points(4, 2000, 11);
    const NnIndex idx = NnIndex::build(pts);
    const LinearScanIndex lin(pts);
    const PointBuffer qs = random_points(4, 300, 12);
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const NnHit want = scan(pts, qs.coords(i));
        for (double r : {0.05, 0.2, 1.0}) {
            const auto got = idx.nearest_within(qs.coords(i), r);
            const auto ref = lin.nearest_within(qs.coords(i), r);
            EXPECT_EQ(got.has_value(), want.distance < r);
            EXPECT_EQ(ref.has_value(), want.distance < r);
            if (got) { EXPECT_EQ(got->owner_id, want.owner_id); }
        }
    }
}

TEST(KdTree, SignCopiesOfUnitaries) {
    const auto pts = embed(identity(2), 7);
    ASSERT_EQ(pts.size(), 2u);
    const NnIndex idx = NnIndex::build(pts);
    const auto q = embed_query(UMat(-identity(2)));
    const NnHit h = idx.nearest(q);
    EXPECT_EQ(h.distance, 0.0);
    EXPECT_EQ(h.owner_id, 7u);
}

TEST(KdTree, VBasisStoredPoints) {
    const GateSet gs = vbasis(1);
    std::vector<EmbedPoint> pts;
    for (std::size_t k = 0; k < gs.basis().size(); ++k) {
        for (auto& p : embed(gs.basis()[k].matrix, static_cast<std::uint32_t>(k))) pts.push_back(std::move(p));
    }
    ASSERT_EQ(pts.size(), 12u);
    const NnIndex idx = NnIndex::build(pts);
    for (std::size_t k = 0; k < gs.basis().size(); ++k) {
        for (const UMat& m : {gs.basis()[k].matrix, UMat(-gs.basis()[k].matrix)}) {
            const NnHit h = idx.nearest(embed_query(m));
            EXPECT_LT(h.distance, 1e-15);
            EXPECT_EQ(h.owner_id, k);
        }
    }
}

TEST(KdTree, SuFourEmbedding) {
    EXPECT_EQ(embed_dim(4), 32);
    std::vector<EmbedPoint> pts;
    for (std::uint32_t s = 0; s < 50; ++s) {
        for (auto& p : embed(haar_random(4, s), s)) pts.push_back(std::move(p));
    }
    EXPECT_EQ(pts.size(), 200u);
    const NnIndex idx = NnIndex::build(pts);
    EXPECT_EQ(idx.dim(), 32);
    for (std::uint32_t s = 0; s < 50; ++s) {
        const UMat u = std::polar(1.0, 0.5 * std::numbers::pi * (s % 4)) * haar_random(4, s);
        const NnHit h = idx.nearest(embed_query(u));
        EXPECT_EQ(h.owner_id, s);
        EXPECT_LT(h.distance, 1e-7);
    }
}

TEST(KdTree, RejectsBadInput) {
    EXPECT_THROW(NnIndex::build(PointBuffer(4)), Error);
    std::vector<EmbedPoint> mixed{{{0, 0, 0, 0}, 0}, {{0, 0, 0}, 1}};
    EXPECT_THROW(NnIndex::build(mixed), Error);
}

TEST(KdTree, StatsAndMemory) {
    const PointBuffer pts = random_points(4, 5000, 1);
    const NnIndex idx = NnIndex::build(pts);
    QueryStats st;
    idx.nearest(pts.coords(17), &st);
    EXPECT_GT(st.points_checked, 0u);
    EXPECT_LT(st.points_checked, 5000u);
    EXPECT_GE(idx.memory_bytes(), 5000 * 5 * sizeof(double));
}
