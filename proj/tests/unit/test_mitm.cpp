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

#include <numeric>

#include "cvsynth/error.hpp"
#include "cvsynth/mitm.hpp"
#include "oracles.hpp"

using namespace cvsynth;

namespace {

// Shortest letter count over every word (no pruning at all) times every
// Pauli suffix, strict acceptance, by plain matrix products.
int oracle_min_vcount(const UMat& t, double eps, int max_len) {
    std::vector<oracle::Mat> letters;
    for (int p = 1; p <= 3; ++p)
        for (int s : {1, -1}) letters.push_back(oracle::v(oracle::pauli(p), s));
    for (int len = 0; len <= max_len; ++len) {
        bool hit = false;
        oracle::for_each_word(6, len, [&](const std::vector<int>& w) {
            if (hit) return;
            oracle::Mat m = oracle::eye(2);
            for (int k : w) m = m * letters[static_cast<std::size_t>(k)];
            for (int p = 0; p < 4 && !hit; ++p) hit = oracle::trace_distance(t, m * oracle::pauli(p)) < eps;
        });
        if (hit) return len;
    }
    return -1;
}

}  // namespace

TEST(Word, ProductOrderAndText) {
    const GateSet gs = vbasis(1);
    const Word w{{0, 4}, 0};
    EXPECT_LT((word_product(gs, w) - gs.basis()[0].matrix * gs.basis()[4].matrix).norm(), 1e-14);
    EXPECT_EQ(word_text(gs, w), "Vz Vx | suffix=I");
    EXPECT_EQ(word_vcount(gs, w), 2);
    const Circuit c = word_circuit(gs, w);
    EXPECT_LT(dist_phase_invariant(circuit_unitary(c), word_product(gs, w)), 1e-12);
    EXPECT_EQ(c.vcount(), 2);
}

TEST(Frontier, LevelSizesAndPruning) {
    const GateSet gs = vbasis(1);
    Frontier f = make_frontier(gs);
    for (int k = 0; k < 3; ++k) f = expand_frontier(std::move(f), gs, 2);
    EXPECT_EQ(f.size(0), 1u);
    EXPECT_EQ(f.size(1), 6u);
    EXPECT_EQ(f.size(2), 30u);
    EXPECT_EQ(f.size(3), 150u);
    for (std::size_t e = 0; e < f.size(3); ++e) {
        const auto w = f.letters(3, e);
        ASSERT_EQ(w.size(), 3u);
        for (std::size_t k = 0; k + 1 < w.size(); ++k) EXPECT_NE(w[k + 1], gs.inverse_index(w[k]));
        EXPECT_LT(dist_phase_invariant(f.product(3, e), word_product(gs, Word{w, 0})), 1e-12);
    }
}

TEST(Frontier, TwoQubitBranching) {
    const GateSet gs = vbasis(2);
    Frontier f = make_frontier(gs);
    for (int k = 0; k < 3; ++k) f = expand_frontier(std::move(f), gs);
    EXPECT_EQ(f.size(1), 30u);
    EXPECT_EQ(f.size(2), 30u * 29u);
    EXPECT_EQ(f.size(3), 30u * 29u * 29u);
    EXPECT_LT(dist_phase_invariant(f.product(3, 1234), word_product(gs, Word{f.letters(3, 1234), 0})), 1e-12);
}

TEST(Mitm, Examples) {
    MitmSearcher s(vbasis(1));
    const GateSet& gs = s.gateset();

    SynthResult r = s.search(pauli(1), 1e-6);
    EXPECT_EQ(r.status, SynthStatus::ok);
    EXPECT_EQ(r.vcount, 0);
    EXPECT_EQ(gs.suffixes()[r.word.suffix].label, "X");

    r = s.search(gs.basis()[0].matrix, 1e-6);
    EXPECT_EQ(r.vcount, 1);
    EXPECT_EQ(word_text(gs, r.word), "Vx | suffix=I");

    const UMat vxvy = gates::v_matrix(Axis::x, 1) * gates::v_matrix(Axis::y, 1);
    r = s.search(vxvy, 1e-6);
    EXPECT_EQ(r.vcount, 2);
    EXPECT_LT(r.error, 1e-6);

    r = s.search(identity(2), 1e-3);
    EXPECT_EQ(r.vcount, 0);
    EXPECT_EQ(r.error, 0.0);
}

// Oracle outputs at eps = 0.15 for seeds 0..29, frozen.
TEST(Mitm, MatchesWordOracle) {
    const std::vector<int> frozen{3, 2, 2, 1, 2, 3, 3, 3, 2, 2, 2, 2, 3, 2, 2,
                                  2, 3, 3, 3, 1, 2, 3, 2, 2, 2, 3, 2, 3, 3, 3};
    MitmSearcher s(vbasis(1));
    std::vector<int> got;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const UMat t = haar_random(2, seed);
        const int want = oracle_min_vcount(t, 0.15, 6);
        const SynthResult r = s.search(t, 0.15);
        ASSERT_EQ(r.status, SynthStatus::ok);
        EXPECT_EQ(r.vcount, want) << "seed " << seed;
        EXPECT_LT(r.error, 0.15);
        EXPECT_NEAR(verify(r, t, s.gateset()), r.error, 1e-12);
        got.push_back(want);
    }
    EXPECT_EQ(got, frozen);
}

TEST(Mitm, AgreesWithLibraryBruteForce) {
    const GateSet gs = vbasis(1);
    MitmSearcher s(gs);
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const UMat t = haar_random(2, seed);
        const SynthResult a = s.search(t, 0.1);
        const SynthResult b = brute_force_search(t, 0.1, gs, 8);
        EXPECT_EQ(a.vcount, b.vcount);
    }
}

TEST(Mitm, MinErrorIsMonotone) {
    MitmSearcher s(vbasis(1));
    const UMat t = haar_random(2, 5);
    double prev = 1.0;
    for (int k = 0; k <= 8; ++k) {
        const SynthResult r = s.min_error(t, k);
        EXPECT_LE(r.vcount, k);
        EXPECT_LE(r.error, prev + 1e-15);
        prev = r.error;
    }
}

TEST(Mitm, VerifyCatchesCorruption) {
    MitmSearcher s(vbasis(1));
    const UMat t = haar_random(2, 8);
    SynthResult r = s.search(t, 0.05);
    ASSERT_EQ(r.status, SynthStatus::ok);
    EXPECT_NO_THROW(verify(r, t, s.gateset()));
    r.word.letters[0] = s.gateset().inverse_index(r.word.letters[0]);
    EXPECT_THROW(verify(r, t, s.gateset()), IntegrityError);
}

TEST(Mitm, DeterministicAcrossWorkers) {
    std::vector<Word> first;
    for (std::size_t workers : {1u, 2u, 4u}) {
        Limits lim;
        lim.workers = workers;
        MitmSearcher s(vbasis(1), lim);
        std::vector<Word> words;
        for (std::uint64_t seed = 0; seed < 10; ++seed) words.push_back(s.search(haar_random(2, seed), 0.01).word);
        if (first.empty()) first = words;
        EXPECT_EQ(words, first);
    }
}

TEST(Mitm, LimitExceeded) {
    Limits lim;
    lim.max_vcount = 2;
    const SynthResult r = mitm_search(haar_random(2, 3), 1e-4, vbasis(1), lim);
    EXPECT_EQ(r.status, SynthStatus::limit_exceeded);
    EXPECT_FALSE(r.message.empty());
    EXPECT_LE(r.vcount, 2);
}

TEST(Mitm, RejectsBadInput) {
    MitmSearcher s(vbasis(1));
    EXPECT_THROW(s.search(identity(4), 0.1), Error);
    EXPECT_THROW(s.search(identity(2), 0.0), Error);
}

TEST(Mitm, SuFourShort) {
    MitmSearcher s(vbasis(2));
    const UMat t = s.gateset().basis()[7].matrix * s.gateset().basis()[20].matrix;
    const SynthResult r = s.search(t, 1e-6);
    EXPECT_EQ(r.status, SynthStatus::ok);
    EXPECT_EQ(r.vcount, 2);
    EXPECT_EQ(std::accumulate(r.word.letters.begin(), r.word.letters.end(), std::size_t{0}), 27u);
}
