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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvsynth/circuit.hpp"
#include "cvsynth/linalg.hpp"

namespace cvsynth {

/// Pauli string over n qubits, entries in {0,1,2,3} for I, X, Y, Z.
struct PauliString {
    std::vector<int> x;

    bool is_identity() const;
    UMat matrix() const;
    /// "XZ" style label, qubit 0 first.
    std::string label() const;
};

struct BasisElement {
    std::string label;
    UMat matrix;
    /// Empty for suffixes.
    std::string inverse_label;
    int vcount_weight = 1;
};

/// A finite alphabet B with inverse pairing plus the weight-0 suffix set S.
class GateSet {
  public:
    GateSet() = default;
    /// Validates unitarity (1e-8), dimensions and closure under inverse; the
    /// inverse pairing must also hold numerically (matrix(inverse) equals
    /// matrix^dagger within 1e-8).
    GateSet(int dim, std::vector<BasisElement> basis, std::vector<BasisElement> suffixes);

    int dim() const { return dim_; }
    int num_qubits() const;
    const std::vector<BasisElement>& basis() const { return basis_; }
    const std::vector<BasisElement>& suffixes() const { return suffixes_; }
    std::size_t inverse_index(std::size_t i) const { return inverse_[i]; }
    std::optional<std::size_t> find_basis(const std::string& label) const;
    std::optional<std::size_t> find_suffix(const std::string& label) const;

    GateSet with_suffixes(std::vector<BasisElement> suffixes) const;

    /// Free-form provenance notes (det normalization, suffix kind, ...).
    std::map<std::string, std::string> metadata;

  private:
    int dim_ = 0;
    std::vector<BasisElement> basis_;
    std::vector<BasisElement> suffixes_;
    std::vector<std::size_t> inverse_;
};

/// The n-qubit V-basis {(I +/- 2i P) / sqrt(5)}; 2(4^n - 1) elements with
/// the n-qubit Pauli suffixes attached. n > 3 needs allow_large.
GateSet vbasis(int n, bool allow_large = false);

enum class SuffixKind { pauli_1q, pauli_nq, clifford_1q_mod_phase };

SuffixKind parse_suffix_kind(const std::string& name);
std::string to_string(SuffixKind kind);
std::vector<BasisElement> suffix_set(SuffixKind kind, int num_qubits = 1);

/// One letter of the conditionally controlled alphabet: C(V_axis^i1, V_axis^i2).
struct CcStep {
    Axis axis = Axis::z;
    int i1 = 1;
    int i2 = 1;

    CcStep inverse() const { return {axis, -i1, -i2}; }
    /// "(z,+1,-1)".
    std::string label() const;
    friend bool operator==(const CcStep&, const CcStep&) = default;
};

/// The 12 two-qubit letters {V_P, V_P^dagger} for P in {IX, IY, IZ, ZX, ZY, ZZ}.
/// Elements with first Pauli I come first; cc_steps()[k] names the
/// (axis, i1, i2) triple of cc_basis().basis()[k].
GateSet cc_basis();
const std::vector<CcStep>& cc_steps();
/// 4x4 block-diagonal C(V^i1, V^i2).
UMat cc_matrix(const CcStep& step);

/// Two-qubit Clifford+V circuit (qubit 0 control, qubit 1 target) for
/// C(V_axis^i1, V_axis^i2) using exactly one V gate.
Circuit emit_cc_template(Axis axis, int i1, int i2);

/// Gate set files (JSON):
///   {"dim": 2,
///    "elements": [{"label": "Vx", "inverse": "Vx'", "weight": 1,
///                  "matrix": [[re, im], ...]}],          // row-major, d^2 pairs
///    "suffixes": [{"label": "I", "matrix": [[re, im], ...]}]}
/// "weight" defaults to 1 and "suffixes" to an empty list; any other key is
/// rejected.
GateSet parse_gateset(const std::string& text);
GateSet load_gateset(const std::filesystem::path& path);
std::string dump_gateset(const GateSet& gs);
/// Suffix-only file: same element schema, top-level {"dim", "suffixes"}.
std::vector<BasisElement> load_suffixes(const std::filesystem::path& path);

/// Single matrix: {"dim": d, "matrix": [[re, im], ...]}, row-major.
UMat parse_unitary(const std::string& text);
UMat load_unitary(const std::filesystem::path& path);
std::string dump_unitary(const UMat& m);

/// Gate for basis element k acting on the given qubits.
Gate basis_gate(const GateSet& gs, std::size_t k, std::vector<int> qubits);
Gate suffix_gate(const GateSet& gs, std::size_t k, std::vector<int> qubits);

}  // namespace cvsynth
