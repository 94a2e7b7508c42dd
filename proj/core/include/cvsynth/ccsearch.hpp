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
#include <string>
#include <vector>

#include "cvsynth/circuit.hpp"
#include "cvsynth/gateset.hpp"
#include "cvsynth/mitm.hpp"

namespace cvsynth {

/// Steps 1..n; step 1 is the innermost factor of the constraint product
/// V_n^{-i_{n,1}} ... V_1^{-i_{1,1}} V_1^{i_{1,2}} ... V_n^{i_{n,2}}.
struct CCWord {
    std::vector<CcStep> steps;

    int vcount() const { return static_cast<int>(steps.size()); }
    /// "(z,-1,+1) (x,+1,+1)", step 1 first.
    std::string text() const;
    friend bool operator==(const CCWord&, const CCWord&) = default;
};

UMat constraint_product(const CCWord& w);
/// C_1 C_2 ... C_n with C_k = C(V_k^{i_{k,1}}, V_k^{i_{k,2}}); blocks A', B'
/// with A'^dagger B' = constraint_product(w).
UMat assemble_cc(const CCWord& w);
/// The left and right diagonal blocks of assemble_cc.
UMat cc_left_block(const CCWord& w);
UMat cc_right_block(const CCWord& w);
/// Step templates in application order (step n first); one V gate per step.
Circuit emit_circuit(const CCWord& w);

/// True when the 4x4 matrices of the two steps commute (norm < 1e-12).
bool steps_commute(const CcStep& a, const CcStep& b);
/// Position of a step in cc_steps().
std::size_t step_index(const CcStep& s);

struct CcOptions {
    Limits limits;
    /// Keep one center per product modulo sign; words stay shortest.
    bool dedup_centers = true;
    /// Drop adjacent commuting steps that are out of cc_steps() order.
    bool commutation_filter = false;

    int resolved_max_length() const { return limits.max_vcount >= 0 ? limits.max_vcount : 24; }
};

struct CcResult {
    SynthStatus status = SynthStatus::not_found;
    CCWord word;
    /// dist_phase_invariant(T, constraint_product(word)).
    double error = 1.0;
    double epsilon = 0.0;
    double elapsed_s = 0.0;
    std::uint64_t nodes_expanded = 0;
    std::string message;

    int vcount() const { return word.vcount(); }
};

/// Subgroup-guided search. Centers (inner products) live in a kd-tree with
/// both sign copies; outer step pairs (L_l, L_r) are queried as
/// L_l^dagger T L_r^dagger. Caches grow across targets.
class CcSearcher {
  public:
    explicit CcSearcher(CcOptions options = {});
    ~CcSearcher();
    CcSearcher(CcSearcher&&) noexcept;
    CcSearcher& operator=(CcSearcher&&) noexcept;

    CcResult search(const UMat& target, double eps);
    /// Closest constraint product with at most max_length steps.
    CcResult min_error(const UMat& target, int max_length);

    const CcOptions& options() const;
    /// Retained centers with exactly this depth.
    std::size_t centers_at(int depth) const;
    /// Stored outer pairs with exactly this depth.
    std::size_t pairs_at(int depth) const;
    std::size_t memory_bytes() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

CcResult cc_search(const UMat& target, double eps, const CcOptions& options = {});

/// Enumerates every pruned step sequence up to max_k (<= 6) in length order
/// with plain matrix products; the reference for cc_search.
CcResult cc_brute_force(const UMat& target, double eps, int max_k);

}  // namespace cvsynth
