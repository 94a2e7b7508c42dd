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
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace cvsynth {

using BigInt = boost::multiprecision::cpp_int;

/// Counts of adopted cc letter sequences by the class of their last letter:
/// state(n+1) = M state(n), M = ((5,4),(6,5)), state(1) = (6,6).
struct TransferMatrix {
    static constexpr std::array<std::array<int, 2>, 2> m{{{5, 4}, {6, 5}}};
    static constexpr std::array<int, 2> v0{6, 6};
};

/// M^(n-1) v0 for 1 <= n <= 40.
std::array<BigInt, 2> adopted_state(int n);
/// Sum of adopted_state(n).
BigInt count_adopted(int n);

/// sqrt(3/2) (phi^n - phi'^n), phi = 5 + 2 sqrt 6, phi' = 5 - 2 sqrt 6.
double closed_form_bound(int n);

struct Enumeration {
    std::uint64_t count = 0;
    /// Distinct 4x4 products modulo global phase, entries rounded to 1e-9.
    std::uint64_t distinct_products = 0;
};

/// Walks all 12^n letter sequences, keeping those with no adjacent inverse
/// pair and no adjacent commuting pair listed out of basis order. n <= 5.
Enumeration enumerate_adopted(int n, std::size_t workers = 0);

enum class BoundModel { su2_v, sun_v, cc_phi };

struct BoundSpec {
    BoundModel model = BoundModel::su2_v;
    /// Qubit count for sun_v.
    int n = 1;
};

/// "su2_v", "cc_phi", "sun_v(n)" or "sun_v:n".
BoundSpec parse_bound_model(const std::string& text);
std::string to_string(const BoundSpec& spec);

/// 3 log_5(1/eps), (4^n - 1) log_{2 4^n - 3}(1/eps) or 3 log_phi(1/eps).
double vcount_lower_bound(const BoundSpec& spec, double eps);

/// 5 + 2 sqrt 6.
double phi();

}  // namespace cvsynth
