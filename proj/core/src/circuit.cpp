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

#include "cvsynth/circuit.hpp"

#include <cmath>

#include "cvsynth/error.hpp"

namespace cvsynth {

char axis_name(Axis axis) {
    switch (axis) {
        case Axis::x:
            return 'x';
        case Axis::y:
            return 'y';
        case Axis::z:
            return 'z';
    }
    return '?';
}

void Circuit::append(const Circuit& other) {
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

int Circuit::vcount() const {
    int total = 0;
    for (const auto& g : gates) total += g.vcount_weight;
    return total;
}

UMat embed_gate(const Gate& gate, int num_qubits) {
    const int k = static_cast<int>(gate.qubits.size());
    if (gate.matrix.rows() != (1 << k) || gate.matrix.cols() != (1 << k)) {
        throw DimensionMismatch("gate " + gate.name + " matrix does not match its qubit count");
    }
    for (int q : gate.qubits) {
        if (q < 0 || q >= num_qubits) {
            throw ValidationError("gate " + gate.name + " acts on qubit " + std::to_string(q) +
                                  " outside a " + std::to_string(num_qubits) + "-qubit register");
        }
    }
    const int dim = 1 << num_qubits;
    auto bit_of = [&](int q) { return num_qubits - 1 - q; };
    int gate_mask = 0;
    for (int q : gate.qubits) gate_mask |= 1 << bit_of(q);

    UMat full = UMat::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        int sub_col = 0;
        for (int t = 0; t < k; ++t) {
            sub_col = (sub_col << 1) | ((col >> bit_of(gate.qubits[static_cast<std::size_t>(t)])) & 1);
        }
        for (int sub_row = 0; sub_row < (1 << k); ++sub_row) {
            int row = col & ~gate_mask;
            for (int t = 0; t < k; ++t) {
                const int bit = (sub_row >> (k - 1 - t)) & 1;
                row |= bit << bit_of(gate.qubits[static_cast<std::size_t>(t)]);
            }
            full(row, col) = gate.matrix(sub_row, sub_col);
        }
    }
    return full;
}

UMat circuit_unitary(const Circuit& circuit) {
    UMat u = identity(1 << circuit.num_qubits);
    for (const auto& g : circuit.gates) u = embed_gate(g, circuit.num_qubits) * u;
    return u;
}

std::string to_text(const Circuit& circuit, bool with_qubits) {
    std::string out;
    for (const auto& g : circuit.gates) {
        if (!out.empty()) out += ' ';
        out += g.name;
        if (with_qubits) {
            out += '(';
            for (std::size_t i = 0; i < g.qubits.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(g.qubits[i]);
            }
            out += ')';
        }
    }
    return out;
}

namespace gates {

namespace {

Gate one(std::string name, int q, UMat m) { return Gate{std::move(name), {q}, std::move(m), 0}; }

}  // namespace

Gate h(int q) {
    UMat m(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    m << r, r, r, -r;
    return one("H", q, m);
}

Gate s(int q) {
    UMat m = UMat::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = Complex(0.0, 1.0);
    return one("S", q, m);
}

Gate sdg(int q) {
    UMat m = UMat::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = Complex(0.0, -1.0);
    return one("S'", q, m);
}

Gate x(int q) { return one("X", q, pauli(1)); }
Gate y(int q) { return one("Y", q, pauli(2)); }
Gate z(int q) { return one("Z", q, pauli(3)); }

Gate cnot(int control, int target) {
    UMat m = UMat::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return Gate{"CNOT", {control, target}, m, 0};
}

UMat v_matrix(Axis axis, int sign) {
    const UMat p = pauli(static_cast<int>(axis) + 1);
    return (identity(2) + Complex(0.0, 2.0 * sign) * p) / std::sqrt(5.0);
}

Gate v(Axis axis, int sign, int q) {
    std::string name = "V";
    name += axis_name(axis);
    if (sign < 0) name += '\'';
    return Gate{name, {q}, v_matrix(axis, sign), 1};
}

}  // namespace gates

}  // namespace cvsynth
