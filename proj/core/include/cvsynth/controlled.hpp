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

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cvsynth/ccsearch.hpp"
#include "cvsynth/circuit.hpp"
#include "cvsynth/mitm.hpp"

namespace cvsynth {

/// Parity of popcount(i & j).
int star(unsigned long long i, unsigned long long j);
/// {y : 2^(n-1) <= y < 2^n, star(y, j) = x}.
std::set<unsigned long long> controlled_index_set(int n, unsigned long long j, int x);

/// Direct sum A_0 + ... + A_{N-1} of 2x2 blocks on n qubits, N = 2^(n-1).
/// Qubits 0..n-2 are controls (qubit 0 most significant), qubit n-1 is the
/// target; block j acts when the controls read j.
struct GeneralizedControlled {
    int n = 2;
    std::vector<UMat> blocks;
    /// Phase removed from every block so that each has determinant 1.
    Complex phase{1.0, 0.0};

    /// Checks shapes and unitarity; blocks sharing one determinant are
    /// rescaled to SU(2) by a single global phase, unequal determinants are
    /// rejected.
    static GeneralizedControlled make(int n, std::vector<UMat> blocks);
    UMat matrix() const;
};

/// The n-qubit matrix with block j equal to (star(i, j) ? x1 : x0).
UMat controlled_factor(int n, const UMat& x0, const UMat& x1, unsigned long long i);

struct PlanFactor {
    unsigned long long index = 0;
    /// Conditionally controlled target: U_{i,0}^dagger U_{i,1}.
    UMat target;
    UMat u0;
    UMat u1;
};

struct DecompositionPlan {
    int n = 2;
    /// i = N-1 down to 1.
    std::vector<PlanFactor> factors;
    /// U_{0,0}: the block applied on the target alone.
    UMat residual;

    /// residual pattern times the ordered factor product, as an n-qubit matrix.
    UMat reassemble() const;
};

struct DecomposeOptions {
    /// n = 4 is off unless set; larger n is unsupported.
    bool allow_n4 = false;
};

/// Exact algebraic plan with gauge U_{i,0} = I. Throws BranchAmbiguityError
/// naming the block pair whose square root is ambiguous.
DecompositionPlan decompose_generalized(const GeneralizedControlled& g, const DecomposeOptions& opt = {});
/// max |entry| of reassemble() - g.matrix().
double reassembly_error(const DecompositionPlan& plan, const GeneralizedControlled& g);

struct Segment {
    enum class Kind { cc, residual };
    Kind kind = Kind::cc;
    unsigned long long index = 0;
    /// The SU(2) element this stage searched for.
    UMat target;
    CCWord cc_word;
    Word residual_word;
    /// The cc word hit -target; a free Z string on the controls fixes it.
    bool sign_flip = false;
    /// Stage search error (2x2 phase-invariant).
    double stage_error = 0.0;
    /// Distance of the realized segment to its exact n-qubit counterpart.
    double error = 0.0;
    double epsilon = 0.0;
    int vcount = 0;
    std::uint64_t nodes_expanded = 0;
    SynthStatus status = SynthStatus::ok;
    Circuit circuit;
};

struct ControlledCircuit {
    int num_qubits = 2;
    std::vector<Segment> segments;
    Circuit circuit;
    int vcount = 0;
    /// Sum of segment errors.
    double error_bound = 0.0;
    /// dist_phase_invariant(circuit unitary, target).
    double error = 0.0;
    std::uint64_t nodes_expanded = 0;
    SynthStatus status = SynthStatus::ok;
    std::string message;
};

struct ControlledOptions {
    Limits limits;
    /// Share of epsilon given to the cc stage in the two-qubit protocol.
    double stage1_fraction = 0.5;
    DecomposeOptions decompose;
};

/// Holds the cc and single-qubit searchers so their caches survive
/// across calls.
class ControlledSynthesizer {
  public:
    explicit ControlledSynthesizer(ControlledOptions opt = {});
    ~ControlledSynthesizer();
    ControlledSynthesizer(ControlledSynthesizer&&) noexcept;
    ControlledSynthesizer& operator=(ControlledSynthesizer&&) noexcept;

    /// C(A, B) = A + B. With A = I the residual is the inverted left letters
    /// of the cc word and the whole epsilon goes to the cc stage.
    ControlledCircuit synth_2q(const UMat& a, const UMat& b, double eps);
    /// Factors i = N-1 .. 1 in sequence, each target conjugated by the left
    /// blocks already synthesized, then the residual. Epsilon is split
    /// equally over the N segments.
    ControlledCircuit synth(const GeneralizedControlled& g, double eps);
    /// layer * g * layer^dagger for a list of CNOTs (control, target).
    ControlledCircuit synth_conjugated(const GeneralizedControlled& g, const std::vector<std::pair<int, int>>& cnots,
                                       double eps);

    CcSearcher& cc();
    MitmSearcher& su2();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

ControlledCircuit synth_controlled_2q(const UMat& a, const UMat& b, double eps, const ControlledOptions& opt = {});
ControlledCircuit synth_generalized(const GeneralizedControlled& g, double eps, const ControlledOptions& opt = {});

/// Maps qubit k of the circuit to qubits[k] in an n-qubit register.
Circuit remap(const Circuit& c, const std::vector<int>& qubits, int num_qubits);

}  // namespace cvsynth
