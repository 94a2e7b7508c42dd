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

#include <cmath>
#include <numbers>
#include <vector>

#include "cvsynth/error.hpp"
#include "cvsynth/linalg.hpp"

namespace cvsynth {

// Flat group-element storage shared by the search modules. d = 2 uses unit
// quaternions (width 4, two sign copies); d > 2 uses the column-major
// complex entries of the determinant-one representative (width 2 d^2, d
// root-of-unity copies).
class SearchRep {
  public:
    explicit SearchRep(int dim) : dim_(dim) {
        if (dim < 2) throw ValidationError("search needs dimension >= 2");
        roots_.resize(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) roots_[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * std::numbers::pi * j / dim);
        scale_ = 1.0 / std::sqrt(2.0 * dim);
    }

    int dim() const { return dim_; }
    int width() const { return dim_ == 2 ? 4 : 2 * dim_ * dim_; }
    int edim() const { return embed_dim(dim_); }
    int copies() const { return dim_ == 2 ? 2 : dim_; }

    double euclid_radius(double eps) const { return dim_ == 2 ? std::sqrt(2.0) * eps : eps; }

    void from_matrix(const UMat& m, double* out) const {
        if (dim_ == 2) {
            const Quat q = quat_from_matrix(m);
            out[0] = q.a;
            out[1] = q.b;
            out[2] = q.c;
            out[3] = q.d;
            return;
        }
        const UMat su = to_special_unitary(m);
        map(out) = su;
    }

    UMat to_matrix(const double* x) const {
        if (dim_ == 2) return matrix_from_quat(Quat{x[0], x[1], x[2], x[3]});
        return cmap(x);
    }

    // out = a * b
    void mul(const double* a, const double* b, double* out) const {
        if (dim_ == 2) {
            store(quat(a) * quat(b), out);
            return;
        }
        map(out).noalias() = cmap(a).lazyProduct(cmap(b));
    }

    // out = a^dagger * b
    void adj_mul(const double* a, const double* b, double* out) const {
        if (dim_ == 2) {
            store(quat(a).conj() * quat(b), out);
            return;
        }
        map(out).noalias() = cmap(a).adjoint().lazyProduct(cmap(b));
    }

    // Phase copy c of x, in embedding coordinates.
    void embed_copy(const double* x, int c, double* out) const {
        if (dim_ == 2) {
            const double s = c == 0 ? 1.0 : -1.0;
            for (int k = 0; k < 4; ++k) out[k] = s * x[k];
            return;
        }
        const Complex w = roots_[static_cast<std::size_t>(c)];
        const auto m = cmap(x);
        std::size_t k = 0;
        for (int i = 0; i < dim_; ++i) {
            for (int j = 0; j < dim_; ++j) {
                const Complex v = w * m(i, j);
                out[k++] = v.real() * scale_;
                out[k++] = v.imag() * scale_;
            }
        }
    }

    // Acceptance metric: phase-invariant distance (d = 2), dist_su_d otherwise.
    double metric(const double* x, const double* y) const {
        if (dim_ == 2) return dist_phase_invariant(quat(x), quat(y));
        return dist_su_d(cmap(x), cmap(y));
    }

  private:
    using CMap = Eigen::Map<const Eigen::MatrixXcd>;
    using MMap = Eigen::Map<Eigen::MatrixXcd>;

    static Quat quat(const double* x) { return {x[0], x[1], x[2], x[3]}; }
    static void store(const Quat& q, double* out) {
        out[0] = q.a;
        out[1] = q.b;
        out[2] = q.c;
        out[3] = q.d;
    }
    CMap cmap(const double* x) const { return CMap(reinterpret_cast<const Complex*>(x), dim_, dim_); }
    MMap map(double* x) const { return MMap(reinterpret_cast<Complex*>(x), dim_, dim_); }

    int dim_;
    double scale_ = 1.0;
    std::vector<Complex> roots_;
};

}  // namespace cvsynth
