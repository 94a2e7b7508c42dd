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

#include "cvsynth/counting.hpp"

#include <cmath>
#include <mutex>
#include <regex>
#include <set>
#include <vector>

#include "cvsynth/error.hpp"
#include "cvsynth/gateset.hpp"
#include "cvsynth/parallel.hpp"

namespace cvsynth {

namespace {

using Key = std::vector<long long>;

// Rotates the first sizable entry onto the positive real axis, then rounds.
Key product_key(const UMat& m) {
    Complex phase{1.0, 0.0};
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        const Complex v = m.data()[k];
        if (std::abs(v) > 1e-3) {
            phase = std::conj(v) / std::abs(v);
            break;
        }
    }
    Key key;
    key.reserve(static_cast<std::size_t>(2 * m.size()));
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        const Complex v = m.data()[k] * phase;
        key.push_back(std::llround(v.real() * 1e9));
        key.push_back(std::llround(v.imag() * 1e9));
    }
    return key;
}

}  // namespace

double phi() { return 5.0 + 2.0 * std::sqrt(6.0); }

std::array<BigInt, 2> adopted_state(int n) {
    if (n < 1 || n > 40) throw ValidationError("count_adopted needs 1 <= n <= 40");
    const auto& m = TransferMatrix::m;
    std::array<BigInt, 2> s{TransferMatrix::v0[0], TransferMatrix::v0[1]};
    for (int k = 1; k < n; ++k) {
        s = {m[0][0] * s[0] + m[0][1] * s[1], m[1][0] * s[0] + m[1][1] * s[1]};
    }
    return s;
}

BigInt count_adopted(int n) {
    const auto s = adopted_state(n);
    return s[0] + s[1];
}

double closed_form_bound(int n) {
    if (n < 1) throw ValidationError("closed_form_bound needs n >= 1");
    const double r = 2.0 * std::sqrt(6.0);
    return std::sqrt(1.5) * (std::pow(5.0 + r, n) - std::pow(5.0 - r, n));
}

Enumeration enumerate_adopted(int n, std::size_t workers) {
    if (n < 1 || n > 5) throw ValidationError("enumerate_adopted needs 1 <= n <= 5");
    const GateSet gs = cc_basis();
    const std::size_t nb = gs.basis().size();

    // allowed[a][b]: letter b may follow letter a.
    std::vector<std::vector<char>> allowed(nb, std::vector<char>(nb, 1));
    for (std::size_t a = 0; a < nb; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
            const UMat& x = gs.basis()[a].matrix;
            const UMat& y = gs.basis()[b].matrix;
            const bool commute = (x * y - y * x).norm() < 1e-12;
            if (gs.inverse_index(a) == b || (commute && a > b)) allowed[a][b] = 0;
        }
    }

    std::mutex mu;
    std::set<Key> seen;
    std::uint64_t total = 0;
    parallel_chunks(nb, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
        std::set<Key> local;
        std::uint64_t count = 0;
        std::vector<UMat> prefix(static_cast<std::size_t>(n));
        std::vector<std::size_t> letter(static_cast<std::size_t>(n));
        auto walk = [&](auto&& self, int depth) -> void {
            if (depth == n) {
                ++count;
                local.insert(product_key(prefix[static_cast<std::size_t>(n - 1)]));
                return;
            }
            const std::size_t prev = letter[static_cast<std::size_t>(depth - 1)];
            for (std::size_t b = 0; b < nb; ++b) {
                if (!allowed[prev][b]) continue;
                letter[static_cast<std::size_t>(depth)] = b;
                prefix[static_cast<std::size_t>(depth)] = prefix[static_cast<std::size_t>(depth - 1)] * gs.basis()[b].matrix;
                self(self, depth + 1);
            }
        };
        for (std::size_t first = begin; first < end; ++first) {
            letter[0] = first;
            prefix[0] = gs.basis()[first].matrix;
            walk(walk, 1);
        }
        std::lock_guard lock(mu);
        total += count;
        seen.merge(local);
    });
    return {total, static_cast<std::uint64_t>(seen.size())};
}

BoundSpec parse_bound_model(const std::string& text) {
    if (text == "su2_v") return {BoundModel::su2_v, 1};
    if (text == "cc_phi") return {BoundModel::cc_phi, 2};
    static const std::regex re(R"(sun_v(?:\((\d+)\)|:(\d+)))");
    std::smatch m;
    if (std::regex_match(text, m, re)) {
        const int n = std::stoi(m[1].matched ? m[1].str() : m[2].str());
        if (n < 1 || n > 10) throw ValidationError("sun_v needs 1 <= n <= 10");
        return {BoundModel::sun_v, n};
    }
    throw ValidationError("unknown bound model '" + text + "' (su2_v, sun_v(n), cc_phi)");
}

std::string to_string(const BoundSpec& spec) {
    switch (spec.model) {
        case BoundModel::su2_v:
            return "su2_v";
        case BoundModel::cc_phi:
            return "cc_phi";
        case BoundModel::sun_v:
            return "sun_v(" + std::to_string(spec.n) + ")";
    }
    return "?";
}

double vcount_lower_bound(const BoundSpec& spec, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
    const double l = std::log(1.0 / eps);
    switch (spec.model) {
        case BoundModel::su2_v:
            return 3.0 * l / std::log(5.0);
        case BoundModel::cc_phi:
            return 3.0 * l / std::log(phi());
        case BoundModel::sun_v: {
            const double q = std::pow(4.0, spec.n);
            return (q - 1.0) * l / std::log(2.0 * q - 3.0);
        }
    }
    throw ValidationError("bad bound model");
}

}  // namespace cvsynth
