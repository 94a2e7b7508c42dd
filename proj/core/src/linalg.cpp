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

#include "cvsynth/linalg.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cvsynth/error.hpp"

namespace cvsynth {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_same_dim(const UMat& u, const UMat& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
        throw DimensionMismatch("distance between " + std::to_string(u.rows()) + "x" +
                                std::to_string(u.cols()) + " and " + std::to_string(v.rows()) +
                                "x" + std::to_string(v.cols()) + " matrices");
    }
}

// Coefficients of a 2x2 matrix in the basis I, iX, iY, iZ; no sign fixing.
Quat raw_quat(const UMat& m) {
    const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    return {0.5 * (m00 + m11).real(), 0.5 * (m01 + m10).imag(), 0.5 * (m01 - m10).real(),
            0.5 * (m00 - m11).imag()};
}

double frobenius_gap(const UMat& u, const UMat& v, Complex phase) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            acc += std::norm(u(i, j) - phase * v(i, j));
        }
    }
    return acc;
}

}  // namespace

Quat Quat::normalized() const {
    const double n = std::sqrt(norm2());
    return {a / n, b / n, c / n, d / n};
}

Quat Quat::canonical() const {
    constexpr double tiny = 1e-14;
    for (double x : {a, b, c, d}) {
        if (std::abs(x) > tiny) return x > 0 ? *this : -*this;
    }
    return *this;
}

UMat identity(int dim) { return UMat::Identity(dim, dim); }

UMat dagger(const UMat& m) { return m.adjoint(); }

UMat kron(const UMat& a, const UMat& b) {
    UMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

UMat pauli(int index) {
    UMat p = UMat::Zero(2, 2);
    switch (index) {
        case 0:
            p(0, 0) = 1.0;
            p(1, 1) = 1.0;
            break;
        case 1:
            p(0, 1) = 1.0;
            p(1, 0) = 1.0;
            break;
        case 2:
            p(0, 1) = -kI;
            p(1, 0) = kI;
            break;
        case 3:
            p(0, 0) = 1.0;
            p(1, 1) = -1.0;
            break;
        default:
            throw ValidationError("pauli index out of range: " + std::to_string(index));
    }
    return p;
}

UMat pauli_string(const std::vector<int>& indices) {
    UMat out = identity(1);
    for (int x : indices) out = kron(out, pauli(x));
    return out;
}

double unitarity_residual(const UMat& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return std::numeric_limits<double>::infinity();
    const UMat r = m * m.adjoint() - identity(static_cast<int>(m.rows()));
    return r.cwiseAbs().maxCoeff();
}

bool is_unitary(const UMat& m, double tol) { return unitarity_residual(m) <= tol; }

UMat to_special_unitary(const UMat& m) {
    const auto d = static_cast<double>(m.rows());
    const Complex det = m.determinant();
    const Complex root = std::polar(std::pow(std::abs(det), 1.0 / d), std::arg(det) / d);
    return m / root;
}

Quat quat_from_matrix(const UMat& m) {
    if (m.rows() != 2 || m.cols() != 2) {
        throw ValidationError("quat_from_matrix expects a 2x2 matrix, got " +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const double residual = unitarity_residual(m);
    if (residual > Tolerances::validation) {
        throw ValidationError("matrix is not unitary (residual " + std::to_string(residual) + ")");
    }
    return raw_quat(to_special_unitary(m)).normalized().canonical();
}

UMat matrix_from_quat(const Quat& q) {
    UMat m(2, 2);
    m(0, 0) = Complex(q.a, q.d);
    m(0, 1) = Complex(q.c, q.b);
    m(1, 0) = Complex(-q.c, q.b);
    m(1, 1) = Complex(q.a, -q.d);
    return m;
}

double dist_phase_invariant(const UMat& u, const UMat& v) {
    require_same_dim(u, v);
    const Complex t = (u * v.adjoint()).trace();
    const double mag = std::abs(t);
    const Complex phase = mag > 0.0 ? t / mag : Complex(1.0, 0.0);
    const double gap = frobenius_gap(u, v, phase);
    return std::sqrt(gap / (2.0 * static_cast<double>(u.rows())));
}

double dist_phase_invariant(const Quat& p, const Quat& q) {
    const double plus = (p.a - q.a) * (p.a - q.a) + (p.b - q.b) * (p.b - q.b) +
                        (p.c - q.c) * (p.c - q.c) + (p.d - q.d) * (p.d - q.d);
    const double minus = (p.a + q.a) * (p.a + q.a) + (p.b + q.b) * (p.b + q.b) +
                         (p.c + q.c) * (p.c + q.c) + (p.d + q.d) * (p.d + q.d);
    return std::sqrt(0.5 * std::min(plus, minus));
}

double dist_su_d(const UMat& u, const UMat& v) {
    require_same_dim(u, v);
    const auto d = static_cast<int>(u.rows());
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < d; ++j) {
        const Complex w = std::polar(1.0, -2.0 * std::numbers::pi * j / d);
        best = std::min(best, frobenius_gap(u, v, w));
    }
    return std::sqrt(best / (2.0 * d));
}

int embed_dim(int d) { return d == 2 ? 4 : 2 * d * d; }

void embed_flat(const UMat& u, double* out) {
    const auto d = static_cast<double>(u.rows());
    const double scale = 1.0 / std::sqrt(2.0 * d);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            out[k++] = u(i, j).real() * scale;
            out[k++] = u(i, j).imag() * scale;
        }
    }
}

std::vector<EmbedPoint> embed(const UMat& u, std::uint32_t owner_id) {
    const auto d = static_cast<int>(u.rows());
    std::vector<EmbedPoint> out;
    if (d == 2) {
        const Quat q = raw_quat(to_special_unitary(u)).normalized();
        out.push_back({{q.a, q.b, q.c, q.d}, owner_id});
        out.push_back({{-q.a, -q.b, -q.c, -q.d}, owner_id});
        return out;
    }
    out.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
        EmbedPoint p{std::vector<double>(static_cast<std::size_t>(embed_dim(d))), owner_id};
        embed_flat(UMat(w * u), p.coords.data());
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<double> embed_query(const UMat& u) {
    const auto d = static_cast<int>(u.rows());
    if (d == 2) {
        const Quat q = raw_quat(to_special_unitary(u)).normalized();
        return {q.a, q.b, q.c, q.d};
    }
    std::vector<double> out(static_cast<std::size_t>(embed_dim(d)));
    embed_flat(u, out.data());
    return out;
}

UMat haar_random(int d, std::uint64_t seed) {
    if (d < 2) throw ValidationError("haar_random needs d >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    UMat z(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            z(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<UMat> qr(z);
    UMat q = qr.householderQ() * identity(d);
    const UMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        const double mag = std::abs(rjj);
        q.col(j) *= mag > 0.0 ? rjj / mag : Complex(1.0, 0.0);
    }
    return to_special_unitary(q);
}

Quat sqrt_su2(const Quat& q) {
    if (1.0 + q.a < Tolerances::sqrt_branch) {
        throw BranchAmbiguityError("square root of -I is not unique");
    }
    const double w = std::sqrt(0.5 * (1.0 + q.a));
    const double s = 0.5 / w;
    return Quat{w, q.b * s, q.c * s, q.d * s}.normalized();
}

UMat sqrt_su2(const UMat& u) {
    if (u.rows() != 2 || u.cols() != 2) throw ValidationError("sqrt_su2 expects a 2x2 matrix");
    if (unitarity_residual(u) > Tolerances::validation ||
        std::abs(u.determinant() - 1.0) > Tolerances::validation) {
        throw ValidationError("sqrt_su2 expects a special-unitary matrix");
    }
    return matrix_from_quat(sqrt_su2(raw_quat(u).normalized()));
}

}  // namespace cvsynth
