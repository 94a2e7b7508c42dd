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

#include "cvsynth/gateset.hpp"

#include <bit>
#include <cmath>
#include <unordered_set>

#include "cvsynth/error.hpp"

namespace cvsynth {

namespace {

constexpr char kPauliChars[] = {'I', 'X', 'Y', 'Z'};

double max_abs(const UMat& m) { return m.cwiseAbs().maxCoeff(); }

// Pauli strings of length n in base-4 counting order, qubit 0 most significant.
std::vector<PauliString> all_pauli_strings(int n) {
    std::vector<PauliString> out;
    const int total = 1 << (2 * n);
    out.reserve(static_cast<std::size_t>(total));
    for (int code = 0; code < total; ++code) {
        PauliString p;
        p.x.resize(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) p.x[static_cast<std::size_t>(q)] = (code >> (2 * (n - 1 - q))) & 3;
        out.push_back(std::move(p));
    }
    return out;
}

std::string v_label(const PauliString& p, bool dagger) {
    std::string label = p.x.size() == 1 ? std::string("V") + static_cast<char>(p.label()[0] - 'A' + 'a')
                                        : "V[" + p.label() + "]";
    if (dagger) label += '\'';
    return label;
}

}  // namespace

bool PauliString::is_identity() const {
    for (int v : x) {
        if (v != 0) return false;
    }
    return true;
}

UMat PauliString::matrix() const {
    if (x.empty()) throw ValidationError("empty Pauli string");
    for (int v : x) {
        if (v < 0 || v > 3) throw ValidationError("Pauli index outside {0,1,2,3}");
    }
    return pauli_string(x);
}

std::string PauliString::label() const {
    std::string s;
    for (int v : x) s += kPauliChars[v & 3];
    return s;
}

GateSet::GateSet(int dim, std::vector<BasisElement> basis, std::vector<BasisElement> suffixes)
    : dim_(dim), basis_(std::move(basis)), suffixes_(std::move(suffixes)) {
    if (dim_ < 2) throw ValidationError("gate set dimension must be at least 2");
    if (basis_.empty()) throw ValidationError("gate set has no basis elements");
    auto check = [&](const BasisElement& e, const char* kind) {
        if (e.matrix.rows() != dim_ || e.matrix.cols() != dim_) {
            throw DimensionMismatch(std::string(kind) + " '" + e.label + "' is not " +
                                    std::to_string(dim_) + "x" + std::to_string(dim_));
        }
        if (unitarity_residual(e.matrix) > Tolerances::validation) {
            throw ValidationError(std::string(kind) + " '" + e.label + "' is not unitary");
        }
        if (e.vcount_weight < 0) {
            throw ValidationError(std::string(kind) + " '" + e.label + "' has negative weight");
        }
    };
    std::unordered_set<std::string> seen;
    for (const auto& e : basis_) {
        check(e, "element");
        if (!seen.insert(e.label).second) throw ValidationError("duplicate label '" + e.label + "'");
    }
    for (auto& e : suffixes_) {
        check(e, "suffix");
        e.vcount_weight = 0;
    }
    inverse_.resize(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        const auto inv = find_basis(basis_[i].inverse_label);
        if (!inv) {
            throw ValidationError("element '" + basis_[i].label + "' names missing inverse '" +
                                  basis_[i].inverse_label + "'");
        }
        if (max_abs(basis_[*inv].matrix - dagger(basis_[i].matrix)) > Tolerances::validation) {
            throw ValidationError("element '" + basis_[*inv].label + "' is not the inverse of '" +
                                  basis_[i].label + "'");
        }
        inverse_[i] = *inv;
    }
}

int GateSet::num_qubits() const {
    if (dim_ <= 0 || !std::has_single_bit(static_cast<unsigned>(dim_))) return 0;
    return std::countr_zero(static_cast<unsigned>(dim_));
}

std::optional<std::size_t> GateSet::find_basis(const std::string& label) const {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (basis_[i].label == label) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> GateSet::find_suffix(const std::string& label) const {
    for (std::size_t i = 0; i < suffixes_.size(); ++i) {
        if (suffixes_[i].label == label) return i;
    }
    return std::nullopt;
}

GateSet GateSet::with_suffixes(std::vector<BasisElement> suffixes) const {
    GateSet out(dim_, basis_, std::move(suffixes));
    out.metadata = metadata;
    return out;
}

GateSet vbasis(int n, bool allow_large) {
    if (n < 1) throw ValidationError("vbasis needs n >= 1");
    if (n > 3 && !allow_large) throw ValidationError("vbasis with n > 3 needs the override flag");
    const double r5 = std::sqrt(5.0);
    std::vector<BasisElement> basis;
    for (const auto& p : all_pauli_strings(n)) {
        if (p.is_identity()) continue;
        const UMat pm = p.matrix();
        const UMat id = identity(1 << n);
        for (int sign : {+1, -1}) {
            BasisElement e;
            e.label = v_label(p, sign < 0);
            e.inverse_label = v_label(p, sign > 0);
            e.matrix = (id + Complex(0.0, 2.0 * sign) * pm) / r5;
            e.vcount_weight = 1;
            basis.push_back(std::move(e));
        }
    }
    GateSet gs(1 << n, std::move(basis), suffix_set(n == 1 ? SuffixKind::pauli_1q : SuffixKind::pauli_nq, n));
    gs.metadata["name"] = "vbasis-" + std::to_string(n) + "q";
    gs.metadata["det_normalization"] = "raw (I +/- 2iP)/sqrt(5); det = 1 already";
    gs.metadata["suffixes"] = to_string(n == 1 ? SuffixKind::pauli_1q : SuffixKind::pauli_nq);
    return gs;
}

SuffixKind parse_suffix_kind(const std::string& name) {
    if (name == "pauli_1q") return SuffixKind::pauli_1q;
    if (name == "pauli_nq") return SuffixKind::pauli_nq;
    if (name == "clifford_1q_mod_phase") return SuffixKind::clifford_1q_mod_phase;
    throw ValidationError("unknown suffix kind '" + name + "'");
}

std::string to_string(SuffixKind kind) {
    switch (kind) {
        case SuffixKind::pauli_1q:
            return "pauli_1q";
        case SuffixKind::pauli_nq:
            return "pauli_nq";
        case SuffixKind::clifford_1q_mod_phase:
            return "clifford_1q_mod_phase";
    }
    return "?";
}

std::vector<BasisElement> suffix_set(SuffixKind kind, int num_qubits) {
    std::vector<BasisElement> out;
    switch (kind) {
        case SuffixKind::pauli_1q:
            num_qubits = 1;
            [[fallthrough]];
        case SuffixKind::pauli_nq:
            if (num_qubits < 1) throw ValidationError("suffix set needs at least one qubit");
            for (const auto& p : all_pauli_strings(num_qubits)) {
                out.push_back(BasisElement{p.label(), p.matrix(), "", 0});
            }
            return out;
        case SuffixKind::clifford_1q_mod_phase: {
            // Closure of <H, S> with breadth-first labels, modulo global phase.
            const Gate gens[] = {gates::h(0), gates::s(0)};
            out.push_back(BasisElement{"I", identity(2), "", 0});
            for (std::size_t head = 0; head < out.size(); ++head) {
                for (const auto& g : gens) {
                    UMat m = g.matrix * out[head].matrix;
                    bool fresh = true;
                    for (const auto& e : out) {
                        if (dist_phase_invariant(e.matrix, m) < 1e-6) {
                            fresh = false;
                            break;
                        }
                    }
                    if (!fresh) continue;
                    const std::string base = out[head].label == "I" ? "" : out[head].label;
                    out.push_back(BasisElement{base + g.name, std::move(m), "", 0});
                }
            }
            return out;
        }
    }
    throw ValidationError("unknown suffix kind");
}

std::string CcStep::label() const {
    std::string s = "(";
    s += axis_name(axis);
    s += i1 > 0 ? ",+1" : ",-1";
    s += i2 > 0 ? ",+1)" : ",-1)";
    return s;
}

const std::vector<CcStep>& cc_steps() {
    static const std::vector<CcStep> steps = [] {
        std::vector<CcStep> s;
        for (Axis a : {Axis::x, Axis::y, Axis::z}) {
            s.push_back({a, +1, +1});
            s.push_back({a, -1, -1});
        }
        for (Axis a : {Axis::x, Axis::y, Axis::z}) {
            s.push_back({a, +1, -1});
            s.push_back({a, -1, +1});
        }
        return s;
    }();
    return steps;
}

UMat cc_matrix(const CcStep& step) {
    UMat m = UMat::Zero(4, 4);
    m.block(0, 0, 2, 2) = gates::v_matrix(step.axis, step.i1);
    m.block(2, 2, 2, 2) = gates::v_matrix(step.axis, step.i2);
    return m;
}

GateSet cc_basis() {
    const auto& steps = cc_steps();
    auto label_of = [](const CcStep& s) {
        std::string p = s.i1 == s.i2 ? "I" : "Z";
        p += static_cast<char>(axis_name(s.axis) - 'a' + 'A');
        return "V[" + p + "]" + (s.i1 < 0 ? "'" : "");
    };
    std::vector<BasisElement> basis;
    for (const auto& s : steps) {
        basis.push_back(BasisElement{label_of(s), cc_matrix(s), label_of(s.inverse()), 1});
    }
    GateSet gs(4, std::move(basis), suffix_set(SuffixKind::pauli_nq, 2));
    gs.metadata["name"] = "cc-basis";
    gs.metadata["step_map"] = "k -> cc_steps()[k]";
    return gs;
}

Circuit emit_cc_template(Axis axis, int i1, int i2) {
    if (std::abs(i1) != 1 || std::abs(i2) != 1) throw ValidationError("template exponents must be +1 or -1");
    Circuit c;
    c.name = "C(V" + std::string(1, axis_name(axis)) + (i1 > 0 ? "" : "'") + ",V" +
             std::string(1, axis_name(axis)) + (i2 > 0 ? "" : "'") + ")";
    c.num_qubits = 2;
    if (i1 == i2) {
        c.gates.push_back(gates::v(axis, i1, 1));
        return c;
    }
    // X V_z X = V_z^dagger on the target.
    const Gate core[] = {gates::cnot(0, 1), gates::v(Axis::z, i1, 1), gates::cnot(0, 1)};
    switch (axis) {
        case Axis::z:
            c.gates.assign(std::begin(core), std::end(core));
            break;
        case Axis::x:
            c.gates.push_back(gates::h(1));
            c.gates.insert(c.gates.end(), std::begin(core), std::end(core));
            c.gates.push_back(gates::h(1));
            break;
        case Axis::y:
            // (S H) Z (S H)^dagger = Y
            c.gates.push_back(gates::sdg(1));
            c.gates.push_back(gates::h(1));
            c.gates.insert(c.gates.end(), std::begin(core), std::end(core));
            c.gates.push_back(gates::h(1));
            c.gates.push_back(gates::s(1));
            break;
    }
    return c;
}

Gate basis_gate(const GateSet& gs, std::size_t k, std::vector<int> qubits) {
    const auto& e = gs.basis().at(k);
    return Gate{e.label, std::move(qubits), e.matrix, e.vcount_weight};
}

Gate suffix_gate(const GateSet& gs, std::size_t k, std::vector<int> qubits) {
    const auto& e = gs.suffixes().at(k);
    return Gate{e.label, std::move(qubits), e.matrix, 0};
}

}  // namespace cvsynth
