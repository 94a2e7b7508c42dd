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
#include "cvsynth/linalg.hpp"
#include "oracles.hpp"

using namespace cvsynth;

namespace {

const double kRt5 = std::sqrt(5.0);

void expect_quat(const Quat& q, double a, double b, double c, double d, double tol = 1e-12) {
    EXPECT_NEAR(q.a, a, tol);
    EXPECT_NEAR(q.b, b, tol);
    EXPECT_NEAR(q.c, c, tol);
    EXPECT_NEAR(q.d, d, tol);
}

UMat random_phase(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    return UMat::Identity(1, 1) * std::polar(1.0, u(rng));
}

}  // namespace

TEST(Quat, FromNamedMatrices) {
    expect_quat(quat_from_matrix(oracle::v(oracle::pauli(1), 1)), 1 / kRt5, 2 / kRt5, 0, 0);
    expect_quat(quat_from_matrix(identity(2)), 1, 0, 0, 0);
    expect_quat(quat_from_matrix(-identity(2)), 1, 0, 0, 0);
}

TEST(Quat, ToMatrix) {
    EXPECT_LT((matrix_from_quat({1, 0, 0, 0}) - identity(2)).norm(), 1e-15);
    EXPECT_LT((matrix_from_quat({1 / kRt5, 0, 0, 2 / kRt5}) - oracle::v(oracle::pauli(3), 1)).norm(), 1e-15);
    EXPECT_LT((matrix_from_quat({0, 1, 0, 0}) - Complex(0, 1) * oracle::pauli(1)).norm(), 1e-15);
}

TEST(Quat, ProductMatchesMatrixProduct) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const UMat a = haar_random(2, s), b = haar_random(2, s + 1000);
        const Quat p = quat_from_matrix(a) * quat_from_matrix(b);
        EXPECT_LT(oracle::trace_distance(matrix_from_quat(p), a * b), 1e-7);
        EXPECT_LT(dist_phase_invariant(matrix_from_quat(p), a * b), 1e-12);
    }
}

TEST(Quat, RoundTrip) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const UMat u = haar_random(2, s);
        EXPECT_LT(dist_phase_invariant(matrix_from_quat(quat_from_matrix(u)), u), 1e-12);
    }
}

TEST(Quat, RejectsNonUnitary) {
    UMat m = identity(2);
    m(0, 0) = 2.0;
    EXPECT_THROW(quat_from_matrix(m), ValidationError);
    EXPECT_THROW(quat_from_matrix(identity(3)), Error);
}

TEST(Distance, Examples) {
    EXPECT_EQ(dist_phase_invariant(identity(2), identity(2)), 0.0);
    const double want = std::sqrt(1.0 - 1.0 / kRt5);
    EXPECT_NEAR(want, 0.74350, 5e-6);
    EXPECT_NEAR(dist_phase_invariant(oracle::v(oracle::pauli(1), 1), identity(2)), want, 1e-12);
    EXPECT_NEAR(dist_phase_invariant(quat_from_matrix(oracle::v(oracle::pauli(1), 1)), Quat::identity()), want, 1e-12);
}

TEST(Distance, MatchesTraceOracle) {
    for (std::uint64_t s = 0; s < 300; ++s) {
        const int d = s % 3 == 0 ? 4 : 2;
        const UMat u = haar_random(d, s), w = haar_random(d, s + 77);
        EXPECT_NEAR(dist_phase_invariant(u, w), oracle::trace_distance(u, w), 1e-9);
    }
}

// 1000 random cases: global phase and unitary conjugation leave the norm
// unchanged.
TEST(Distance, PhaseAndUnitaryInvariance) {
    std::mt19937_64 rng(17);
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const int d = s % 2 ? 2 : 4;
        const UMat u = haar_random(d, 3 * s), w = haar_random(d, 3 * s + 1), g = haar_random(d, 3 * s + 2);
        const double base = dist_phase_invariant(u, w);
        EXPECT_NEAR(dist_phase_invariant(random_phase(rng)(0, 0) * u, w), base, 1e-12);
        EXPECT_NEAR(dist_phase_invariant(g * u, g * w), base, 1e-12);
        EXPECT_NEAR(dist_phase_invariant(u * g, w * g), base, 1e-12);
        EXPECT_NEAR(dist_phase_invariant(u, w), dist_phase_invariant(w, u), 1e-12);
    }
}

TEST(Distance, SubadditiveOnProducts) {
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const UMat u1 = haar_random(2, 4 * s), u2 = haar_random(2, 4 * s + 1);
        const UMat v1 = haar_random(2, 4 * s + 2), v2 = haar_random(2, 4 * s + 3);
        EXPECT_LE(dist_phase_invariant(u1 * u2, v1 * v2), dist_phase_invariant(u1, v1) + dist_phase_invariant(u2, v2) + 1e-12);
    }
}

TEST(Distance, SuDRootInvariance) {
    EXPECT_EQ(dist_su_d(identity(4), identity(4)), 0.0);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const UMat u = haar_random(4, s);
        EXPECT_LT(dist_su_d(u, std::polar(1.0, 2 * std::numbers::pi / 4) * u), 1e-7);
    }
}

TEST(Distance, SuDCloseToPhaseInvariantNearby) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    int checked = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const UMat u = haar_random(4, s);
        UMat h(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) h(i, j) = Complex(n(rng), n(rng));
        h = (h + h.adjoint()).eval();
        h -= identity(4) * (h.trace() / 4.0);
        const Eigen::SelfAdjointEigenSolver<UMat> es(h);
        const Eigen::VectorXcd ph = (Complex(0, 0.02 / h.norm()) * es.eigenvalues().cast<Complex>()).array().exp();
        const UMat k = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
        const UMat w = u * k;
        if (dist_phase_invariant(u, w) > 0.05) continue;
        ++checked;
        EXPECT_LE(std::abs(dist_su_d(u, w) - dist_phase_invariant(u, w)), 2e-3);
    }
    EXPECT_GT(checked, 900);
}

TEST(Embedding, SignCopiesOfIdentity) {
    const auto pts = embed(identity(2));
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[0].coords, (std::vector<double>{1, 0, 0, 0}));
    EXPECT_EQ(pts[1].coords, (std::vector<double>{-1, 0, 0, 0}));
}

double nearest_copy(const UMat& u, const UMat& w) {
    const auto q = embed_query(u);
    double best = 1e300;
    for (const auto& p : embed(w)) {
        double s = 0;
        for (std::size_t k = 0; k < q.size(); ++k) s += (q[k] - p.coords[k]) * (q[k] - p.coords[k]);
        best = std::min(best, std::sqrt(s));
    }
    return best;
}

TEST(Embedding, VxAgainstIdentity) {
    EXPECT_NEAR(nearest_copy(oracle::v(oracle::pauli(1), 1), identity(2)), std::sqrt(2.0) * std::sqrt(1.0 - 1.0 / kRt5), 1e-12);
    EXPECT_NEAR(nearest_copy(oracle::v(oracle::pauli(1), 1), identity(2)), 1.05147, 1e-5);
}

// Euclidean distance to the nearest copy equals sqrt 2 times the
// phase-invariant distance (d = 2) and dist_su_d (d = 4).
TEST(Embedding, IsometryIdentity) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const UMat u2 = haar_random(2, s), w2 = haar_random(2, s + 500);
        EXPECT_NEAR(nearest_copy(u2, w2), std::sqrt(2.0) * dist_phase_invariant(u2, w2), 1e-12);
        const UMat u4 = haar_random(4, s), w4 = haar_random(4, s + 500);
        EXPECT_NEAR(nearest_copy(u4, w4), dist_su_d(u4, w4), 1e-12);
    }
}

TEST(Haar, UnitaryWithUnitDeterminant) {
    for (int d : {2, 4, 8}) {
        const UMat u = haar_random(d, 42);
        EXPECT_LT(unitarity_residual(u), 1e-10);
        EXPECT_LT(std::abs(u.determinant() - 1.0), 1e-10);
    }
}

TEST(Haar, Deterministic) {
    EXPECT_EQ(haar_random(2, 9), haar_random(2, 9));
    EXPECT_NE(haar_random(2, 9), haar_random(2, 10));
}

TEST(Haar, SecondMoment) {
    const int d = 2;
    const int n = 100000;
    double sum = 0, sum2 = 0;
    for (int s = 0; s < n; ++s) {
        const double x = std::norm(haar_random(d, static_cast<std::uint64_t>(s)).trace()) / d;
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double sigma = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, 1.0 / d, 3 * sigma);
}

TEST(Sqrt, Examples) {
    EXPECT_LT((sqrt_su2(identity(2)) - identity(2)).norm(), 1e-15);
    const UMat ix = Complex(0, 1) * oracle::pauli(1);
    const UMat r = sqrt_su2(ix);
    EXPECT_LT((r - (identity(2) + ix) / std::sqrt(2.0)).norm(), 1e-12);
    EXPECT_LT((r * r - ix).norm(), 1e-12);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const UMat u = haar_random(2, s);
        const UMat w = sqrt_su2(u);
        EXPECT_LT((w * w - u).cwiseAbs().maxCoeff(), 1e-10);
    }
    EXPECT_THROW(sqrt_su2(UMat(-identity(2))), BranchAmbiguityError);
}

TEST(SpecialUnitary, Normalizes) {
    const UMat u = std::polar(1.0, 0.3) * haar_random(4, 3);
    const UMat su = to_special_unitary(u);
    EXPECT_LT(std::abs(su.determinant() - 1.0), 1e-12);
    EXPECT_LT(dist_phase_invariant(su, u), 1e-7);
}
