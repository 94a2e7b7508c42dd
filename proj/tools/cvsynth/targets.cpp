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

#include "targets.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "cvsynth/circuit.hpp"
#include "cvsynth/error.hpp"

namespace cvsynth::cli {

namespace {

const std::map<std::string, UMat>& named() {
    static const std::map<std::string, UMat> table = [] {
        std::map<std::string, UMat> t;
        t["i"] = identity(2);
        t["x"] = pauli(1);
        t["y"] = pauli(2);
        t["z"] = pauli(3);
        t["h"] = gates::h(0).matrix;
        t["s"] = gates::s(0).matrix;
        t["sdg"] = gates::sdg(0).matrix;
        UMat tg = identity(2);
        tg(1, 1) = std::polar(1.0, std::numbers::pi / 4);
        t["t"] = tg;
        t["tdg"] = dagger(tg);
        for (Axis a : {Axis::x, Axis::y, Axis::z}) {
            const std::string base = std::string("v") + axis_name(a);
            t[base] = gates::v_matrix(a, 1);
            t[base + "'"] = gates::v_matrix(a, -1);
        }
        t["cnot"] = gates::cnot(0, 1).matrix;
        UMat cz = identity(4);
        cz(3, 3) = -1.0;
        t["cz"] = cz;
        UMat swap = UMat::Zero(4, 4);
        swap(0, 0) = swap(3, 3) = 1.0;
        swap(1, 2) = swap(2, 1) = 1.0;
        t["swap"] = swap;
        return t;
    }();
    return table;
}

template <typename T>
T parse_number(const std::string& s, const std::string& what) {
    T v{};
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw ParseError("bad " + what + " '" + s + "'");
    return v;
}

}  // namespace

std::vector<std::string> named_targets() {
    std::vector<std::string> out;
    for (const auto& [k, v] : named()) out.push_back(k);
    return out;
}

UMat parse_target(const std::string& spec) {
    if (spec.rfind("file:", 0) == 0) return load_unitary(spec.substr(5));
    if (spec.rfind("haar:", 0) == 0) {
        const std::string rest = spec.substr(5);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw ParseError("haar target needs haar:<d>:<seed>");
        const int d = parse_number<int>(rest.substr(0, colon), "dimension");
        const auto seed = parse_number<std::uint64_t>(rest.substr(colon + 1), "seed");
        if (d < 2 || d > 64) throw ParseError("haar dimension must lie in [2, 64]");
        return haar_random(d, seed);
    }
    std::string key = spec;
    for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto it = named().find(key);
    if (it == named().end()) throw ParseError("unknown target '" + spec + "'");
    return it->second;
}

GateSet parse_gateset_spec(const std::string& spec) {
    if (spec == "v1q") return vbasis(1);
    if (spec == "v2q") return vbasis(2);
    if (spec == "v3q") return vbasis(3);
    if (spec == "cc") return cc_basis();
    return load_gateset(spec);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        if (!piece.empty()) out.push_back(piece);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    for (const auto& p : split_list(text)) {
        const double v = parse_number<double>(p, "number");
        if (!std::isfinite(v)) throw ParseError("non-finite number '" + p + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    for (const auto& p : split_list(text)) out.push_back(parse_number<int>(p, "integer"));
    return out;
}

}  // namespace cvsynth::cli
