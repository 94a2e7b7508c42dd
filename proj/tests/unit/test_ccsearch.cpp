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

#include "cvsynth/ccsearch.hpp"
#include "cvsynth/error.hpp"
#include "oracles.hpp"

using namespace cvsynth;

namespace {

struct OStep {
    int axis, i1, i2;
};

std::vector<OStep> oracle_steps() {
    std::vector<OStep> out;
    for (int a = 1; a <= 3; ++a)
        for (int i1 : {1, -1})
            for (int i2 : {1, -1}) out.push_back({a, i1, i2});
    return out;
}

oracle::Mat oracle_v(int axis, int sign) { return oracle::v(oracle::pauli(axis), sign); }

// Constraint product of a step sequence, step 1 innermost.
oracle::Mat oracle_constraint(const std::vector<OStep>& steps) {
    oracle::Mat m = oracle::eye(2);
    for (const auto& s : steps) m = oracle_v(s.axis, -s.i1) * m * oracle_v(s.axis, s.i2);
    return m;
}

// Shortest sequence length over all 12^k unpruned sequences.
int oracle_min_length(const UMat& t, double eps, int max_len) {
    const auto all = oracle_steps();
    for (int len = 0; len <= max_len; ++len) {
        bool hit = false;
        oracle::for_each_word(12, len, [&](const std::vector<int>& w) {
            if (hit) return;
            std::vector<OStep> s;
            for (int k : w) s.push_back(all[static_cast<std::size_t>(k)]);
            hit = oracle::trace_distance(t, oracle_constraint(s)) < eps;
        });
        if (hit) return len;
    }
    return -1;
}

}  // namespace

TEST(CcSearch, Examples) {
    CcSearcher s;
    CcResult r = s.search(identity(2), 1e-6);
    EXPECT_EQ(r.status, SynthStatus::ok);
    EXPECT_TRUE(r.word.steps.empty());

    const UMat vz = gates::v_matrix(Axis::z, 1);
    r = s.search(vz * vz, 1e-6);
    ASSERT_EQ(r.vcount(), 1);
    EXPECT_EQ(r.word.steps[0], (CcStep{Axis::z, -1, 1}));
    EXPECT_EQ(r.word.text(), "(z,-1,+1)");

    const UMat vx = gates::v_matrix(Axis::x, 1);
    r = s.search(vx * vx, 1e-6);
    EXPECT_EQ(r.vcount(), 1);
    EXPECT_LT(r.error, 1e-6);
}

TEST(CcSearch, BlockStructure) {
    const CCWord w{{{Axis::z, -1, 1}, {Axis::x, 1, 1}, {Axis::y, 1, -1}}};
    const UMat m = assemble_cc(w);
    const UMat a = cc_left_block(w), b = cc_right_block(w);
    EXPECT_LT(m.block(0, 2, 2, 2).norm(), 1e-14);
    EXPECT_LT(m.block(2, 0, 2, 2).norm(), 1e-14);
    EXPECT_LT((m.block(0, 0, 2, 2) - a).norm(), 1e-14);
    EXPECT_LT((m.block(2, 2, 2, 2) - b).norm(), 1e-14);
    EXPECT_LT((a.adjoint() * b - constraint_product(w)).norm(), 1e-13);
    std::vector<OStep> os;
    for (const auto& s : w.steps) os.push_back({static_cast<int>(s.axis) + 1, s.i1, s.i2});
    EXPECT_LT((constraint_product(w) - oracle_constraint(os)).norm(), 1e-13);
}

TEST(CcSearch, EmittedCircuit) {
    const CCWord w{{{Axis::z, -1, 1}, {Axis::x, 1, 1}, {Axis::y, 1, -1}}};
    const Circuit c = emit_circuit(w);
    EXPECT_EQ(c.vcount(), 3);
    std::size_t gates = 0;
    for (const auto& s : w.steps) gates += emit_cc_template(s.axis, s.i1, s.i2).gates.size();
    EXPECT_EQ(c.gates.size(), gates);
    EXPECT_LT(dist_phase_invariant(circuit_unitary(c), assemble_cc(w)), 1e-12);
}

// Oracle outputs at eps = 0.2 for seeds 0..19, frozen.
TEST(CcSearch, MatchesStepOracle) {
    const std::vector<int> frozen{2, 3, 3, 3, 3, 2, 3, 3, 2, 3, 2, 3, 3, 3, 3, 2, 3, 3, 3, 3};
    CcSearcher s;
    std::vector<int> got;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const UMat t = haar_random(2, seed);
        const int want = oracle_min_length(t, 0.2, 5);
        const CcResult r = s.search(t, 0.2);
        ASSERT_EQ(r.status, SynthStatus::ok);
        EXPECT_EQ(r.vcount(), want) << "seed " << seed;
        EXPECT_NEAR(dist_phase_invariant(t, constraint_product(r.word)), r.error, 1e-12);
        EXPECT_LT(r.error, 0.2);
        got.push_back(want);
    }
    EXPECT_EQ(got, frozen);
}

TEST(CcSearch, AgreesWithLibraryBruteForce) {
    CcSearcher s;
    for (std::uint64_t seed = 200; seed < 215; ++seed) {
        const UMat t = haar_random(2, seed);
        EXPECT_EQ(s.search(t, 0.15).vcount(), cc_brute_force(t, 0.15, 6).vcount());
    }
}

TEST(CcSearch, CommutationFilterKeepsLength) {
    CcOptions opt;
    opt.commutation_filter = true;
    CcSearcher filtered(opt);
    CcSearcher plain;
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const UMat t = haar_random(2, seed);
        const CcResult a = filtered.search(t, 0.05), b = plain.search(t, 0.05);
        EXPECT_EQ(a.vcount(), b.vcount());
        for (std::size_t k = 0; k + 1 < a.word.steps.size(); ++k) {
            const auto& x = a.word.steps[k];
            const auto& y = a.word.steps[k + 1];
            EXPECT_NE(x, y.inverse());
        }
    }
}

TEST(CcSearch, StepsCommute) {
    EXPECT_TRUE(steps_commute({Axis::z, 1, 1}, {Axis::z, 1, -1}));
    EXPECT_FALSE(steps_commute({Axis::z, 1, 1}, {Axis::x, 1, 1}));
    for (std::size_t k = 0; k < cc_steps().size(); ++k) EXPECT_EQ(step_index(cc_steps()[k]), k);
}

TEST(CcSearch, DedupDoesNotChangeLength) {
    CcOptions opt;
    opt.dedup_centers = false;
    CcSearcher raw(opt);
    CcSearcher dedup;
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
        const UMat t = haar_random(2, seed);
        EXPECT_EQ(raw.search(t, 0.08).vcount(), dedup.search(t, 0.08).vcount());
    }
}

TEST(CcSearch, MinErrorAndLimits) {
    CcSearcher s;
    const UMat t = haar_random(2, 3);
    double prev = 1.0;
    for (int k = 0; k <= 6; ++k) {
        const CcResult r = s.min_error(t, k);
        EXPECT_LE(r.vcount(), k);
        EXPECT_LE(r.error, prev + 1e-15);
        prev = r.error;
    }
    CcOptions opt;
    opt.limits.max_vcount = 2;
    EXPECT_EQ(cc_search(t, 1e-4, opt).status, SynthStatus::limit_exceeded);
    EXPECT_THROW(s.search(identity(4), 0.1), Error);
}
