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
#include <functional>

#include "cvsynth/counting.hpp"
#include "cvsynth/error.hpp"

using namespace cvsynth;

namespace {

// Letters as (axis, i1, i2) in basis order: the three equal-sign pairs,
// then the three opposite-sign pairs. Inverse: same axis, both signs
// flipped. Commuting: same axis.
struct L {
    int axis, i1, i2;
};

std::vector<L> letters() {
    std::vector<L> out;
    for (int a = 0; a < 3; ++a) {
        out.push_back({a, 1, 1});
        out.push_back({a, -1, -1});
    }
    for (int a = 0; a < 3; ++a) {
        out.push_back({a, 1, -1});
        out.push_back({a, -1, 1});
    }
    return out;
}

std::uint64_t oracle_count(int n) {
    const auto ls = letters();
    std::uint64_t total = 0;
    std::vector<int> w(static_cast<std::size_t>(n), 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == n) {
            ++total;
            return;
        }
        for (int b = 0; b < 12; ++b) {
            if (pos > 0) {
                const L& p = ls[static_cast<std::size_t>(w[static_cast<std::size_t>(pos - 1)])];
                const L& q = ls[static_cast<std::size_t>(b)];
                if (p.axis == q.axis && (p.i1 == -q.i1 && p.i2 == -q.i2)) continue;
                if (p.axis == q.axis && w[static_cast<std::size_t>(pos - 1)] > b) continue;
            }
            w[static_cast<std::size_t>(pos)] = b;
            rec(pos + 1);
        }
    };
    rec(0);
    return total;
}

}  // namespace

TEST(Counting, SmallValues) {
    EXPECT_EQ(count_adopted(1), 12);
    EXPECT_EQ(count_adopted(2), 120);
    EXPECT_EQ(count_adopted(3), 1188);
    for (int n = 1; n <= 5; ++n) EXPECT_EQ(count_adopted(n), oracle_count(n)) << n;
}

TEST(Counting, EnumerationMatches) {
    for (int n = 1; n <= 4; ++n) {
        const Enumeration e = enumerate_adopted(n, 2);
        EXPECT_EQ(e.count, oracle_count(n));
        EXPECT_LE(e.distinct_products, e.count);
    }
    EXPECT_EQ(enumerate_adopted(1).distinct_products, 12u);
    EXPECT_THROW(enumerate_adopted(6), Error);
}

TEST(Counting, Recurrence) {
    for (int n = 1; n < 20; ++n) {
        const auto s = adopted_state(n), t = adopted_state(n + 1);
        EXPECT_EQ(t[0], 5 * s[0] + 4 * s[1]);
        EXPECT_EQ(t[1], 6 * s[0] + 5 * s[1]);
    }
    EXPECT_THROW(adopted_state(0), Error);
    EXPECT_THROW(adopted_state(41), Error);
    EXPECT_GT(count_adopted(40), BigInt(1) << 120);
}

TEST(Counting, ClosedForm) {
    for (int n = 1; n <= 8; ++n) {
        const double c = count_adopted(n).convert_to<double>();
        EXPECT_LE(std::abs(c - closed_form_bound(n)) / c, 1e-12) << n;
    }
    const double f = phi();
    EXPECT_NEAR(std::sqrt(1.5) * (f - 1.0 / f), 12.0, 1e-12);
}

TEST(Bounds, Values) {
    EXPECT_NEAR(vcount_lower_bound(parse_bound_model("su2_v"), 1e-2), 8.584, 5e-4);
    EXPECT_NEAR(vcount_lower_bound(parse_bound_model("sun_v(2)"), 1e-2), 20.51, 5e-3);
    EXPECT_NEAR(vcount_lower_bound(parse_bound_model("sun_v:2"), 1e-2), 20.51, 5e-3);
    EXPECT_EQ(vcount_lower_bound(parse_bound_model("cc_phi"), 1.0), 0.0);
    EXPECT_NEAR(vcount_lower_bound(parse_bound_model("cc_phi"), 1e-3), 9.0 / std::log10(phi()), 1e-12);
    EXPECT_EQ(to_string(parse_bound_model("sun_v(3)")), "sun_v(3)");
}

TEST(Bounds, Errors) {
    EXPECT_THROW(parse_bound_model("sun_v"), Error);
    EXPECT_THROW(parse_bound_model("sun_v(0)"), Error);
    EXPECT_THROW(parse_bound_model("foo"), Error);
    EXPECT_THROW(vcount_lower_bound(parse_bound_model("su2_v"), 0.0), Error);
    EXPECT_THROW(vcount_lower_bound(parse_bound_model("su2_v"), 2.0), Error);
}
