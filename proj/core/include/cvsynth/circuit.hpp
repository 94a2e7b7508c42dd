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

#include <string>
#include <vector>

#include "cvsynth/linalg.hpp"

namespace cvsynth {

enum class Axis { x = 0, y = 1, z = 2 };

char axis_name(Axis axis);

/// A gate acting on the listed qubits. Qubit 0 is the most significant bit
/// of the computational-basis index.
struct Gate {
    std::string name;
    std::vector<int> qubits;
    UMat matrix;
    int vcount_weight = 0;
};

/// Gates in application order: gates.front() acts first.
struct Circuit {
    std::string name;
    int num_qubits = 1;
    std::vector<Gate> gates;

    void append(const Circuit& other);
    int vcount() const;
};

/// Full 2^n x 2^n unitary of a gate placed on its qubits.
UMat embed_gate(const Gate& gate, int num_qubits);
/// Product g_last * ... * g_first.
UMat circuit_unitary(const Circuit& circuit);

/// Tokens separated by spaces; "'" marks a dagger. With qubit indices the
/// token reads `Name(q0,q1)`.
std::string to_text(const Circuit& circuit, bool with_qubits = true);

namespace gates {

Gate h(int q);
Gate s(int q);
Gate sdg(int q);
Gate x(int q);
Gate y(int q);
Gate z(int q);
Gate cnot(int control, int target);
/// V_axis^{sign} = (I + 2 i sign P_axis) / sqrt(5), V-count weight 1.
Gate v(Axis axis, int sign, int q);
UMat v_matrix(Axis axis, int sign);

}  // namespace gates

}  // namespace cvsynth
