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

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cvsynth {

using Complex = std::complex<double>;

/// Dense d x d complex matrix. Every matrix handed to the distance and
/// embedding functions is expected to be unitary; special-unitarity is
/// required only where noted.
using UMat = Eigen::MatrixXcd;

/// Numerical tolerances shared by every module.
struct Tolerances {
    /// U U^dagger = I entrywise.
    static constexpr double unitarity = 1e-10;
    /// Quat <-> matrix round trips and exact algebraic identities.
    static constexpr double reconstruction = 1e-12;
    /// Residual above which user-supplied matrices are rejected.
    static constexpr double validation = 1e-8;
    /// Distance to -I below which sqrt_su2 refuses to pick a branch.
    static constexpr double sqrt_branch = 1e-12;
    /// Smallest accepted synthesis accuracy.
    static constexpr double epsilon_floor = 1e-9;
    /// Exact plan reassembly in the controlled-gate decomposition.
    static constexpr double plan_reassembly = 1e-9;
};

/// SU(2) element a*I + b*iX + c*iY + d*iZ with a^2+b^2+c^2+d^2 = 1.
struct Quat {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    static constexpr Quat identity() { return {1.0, 0.0, 0.0, 0.0}; }

    constexpr Quat operator-() const { return {-a, -b, -c, -d}; }
    constexpr Quat conj() const { return {a, -b, -c, -d}; }
    constexpr double norm2() const { return a * a + b * b + c * c + d * d; }
    Quat normalized() const;
    /// Flip the global sign so the first nonzero coefficient is positive.
    Quat canonical() const;
    constexpr std::array<double, 4> coords() const { return {a, b, c, d}; }

    friend constexpr bool operator==(const Quat&, const Quat&) = default;
};

/// Product matching 2x2 matrix multiplication under matrix_from_quat.
constexpr Quat operator*(const Quat& p, const Quat& q) {
    return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            p.a * q.b + q.a * p.b - (p.c * q.d - p.d * q.c),
            p.a * q.c + q.a * p.c - (p.d * q.b - p.b * q.d),
            p.a * q.d + q.a * p.d - (p.b * q.c - p.c * q.b)};
}

constexpr double dot(const Quat& p, const Quat& q) {
    return p.a * q.a + p.b * q.b + p.c * q.c + p.d * q.d;
}

// Matrix helpers.
UMat identity(int dim);
UMat dagger(const UMat& m);
UMat kron(const UMat& a, const UMat& b);
/// Single-qubit Pauli: 0 -> I, 1 -> X, 2 -> Y, 3 -> Z.
UMat pauli(int index);
/// Tensor product of single-qubit Paulis, qubit 0 leftmost.
UMat pauli_string(const std::vector<int>& indices);
/// max |(U U^dagger - I)_{ij}|.
double unitarity_residual(const UMat& m);
bool is_unitary(const UMat& m, double tol = Tolerances::unitarity);
/// Divide by a d-th root of det(U); the chosen root is the principal one.
UMat to_special_unitary(const UMat& m);

/// Throws ValidationError when the unitarity residual exceeds 1e-8 or the
/// matrix is not 2x2. Input need not be special-unitary: the global phase is
/// removed before extraction and the sign canonicalized.
Quat quat_from_matrix(const UMat& m);
UMat matrix_from_quat(const Quat& q);

/// sqrt(1 - |tr(U V^dagger)| / d). Evaluated through the equivalent
/// Frobenius form min_phi ||U - e^{i phi} V||_F / sqrt(2d), which keeps full
/// relative precision for nearby arguments.
double dist_phase_invariant(const UMat& u, const UMat& v);
/// The same norm for SU(2) elements: sqrt(1 - |<p, q>|).
double dist_phase_invariant(const Quat& p, const Quat& q);

/// min over d-th roots of unity w of sqrt(1 - Re(w tr(U V^dagger)) / d).
double dist_su_d(const UMat& u, const UMat& v);

/// Point in the Euclidean image of SU(d). owner_id names the group element
/// the copy was generated from.
struct EmbedPoint {
    std::vector<double> coords;
    std::uint32_t owner_id = 0;
};

/// Embedding dimension: 4 for d = 2, 2 d^2 otherwise.
int embed_dim(int d);
/// All phase copies of U: +/-(a,b,c,d) for d = 2, otherwise the flattened
/// (re, im) entries of e^{2 pi i j/d} U / sqrt(2d) for j = 0..d-1.
std::vector<EmbedPoint> embed(const UMat& u, std::uint32_t owner_id = 0);
/// The j = 0 copy only; the query-side embedding.
std::vector<double> embed_query(const UMat& u);
/// Flattened (re, im) entries scaled by 1/sqrt(2d) into out[0..2d^2).
void embed_flat(const UMat& u, double* out);

/// Haar-distributed SU(d) element, deterministic in (d, seed).
UMat haar_random(int d, std::uint64_t seed);

/// Principal square root in SU(2): W^2 = U with W's scalar part >= 0.
/// Throws BranchAmbiguityError when U is within 1e-12 of -I.
Quat sqrt_su2(const Quat& q);
UMat sqrt_su2(const UMat& u);

}  // namespace cvsynth
