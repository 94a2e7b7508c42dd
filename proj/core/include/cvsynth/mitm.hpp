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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cvsynth/circuit.hpp"
#include "cvsynth/gateset.hpp"
#include "cvsynth/linalg.hpp"

namespace cvsynth {

/// Letters and suffix as indices into a GateSet. The product is
/// basis[letters[0]] * ... * basis[letters.back()] * suffixes[suffix], so the
/// suffix acts first.
struct Word {
    std::vector<std::size_t> letters;
    std::size_t suffix = 0;

    friend bool operator==(const Word&, const Word&) = default;
};

UMat word_product(const GateSet& gs, const Word& w);
int word_vcount(const GateSet& gs, const Word& w);
/// Application order, e.g. "Vx Vz' | suffix=I"; the suffix acts before the
/// first listed letter.
std::string word_text(const GateSet& gs, const Word& w);
/// Gates in application order: suffix (unless it is the identity), then the
/// letters from last to first.
Circuit word_circuit(const GateSet& gs, const Word& w);

enum class SynthStatus { ok, limit_exceeded, not_found };
std::string to_string(SynthStatus s);

struct Limits {
    /// Longest word searched; negative picks 28 for d = 2, 10 for d = 4, 6 above.
    int max_vcount = -1;
    std::size_t max_memory_bytes = std::size_t{8} << 30;
    /// 0 uses default_workers().
    std::size_t workers = 0;

    int resolved_max_vcount(int dim) const;
};

struct SynthResult {
    SynthStatus status = SynthStatus::not_found;
    Word word;
    /// dist_phase_invariant(T, product); the best found so far unless status is ok.
    double error = 1.0;
    int vcount = 0;
    double epsilon = 0.0;
    double elapsed_s = 0.0;
    /// Nearest-neighbour queries a sequential scan would have issued.
    std::uint64_t nodes_expanded = 0;
    std::string message;
};

/// Pruned word tree grown by prepending letters. levels[i] holds all words
/// of length i; element e of level i is first[e] * (element parent[e] of
/// level i - 1). Products are stored flat: a unit quaternion for d = 2,
/// otherwise the column-major complex entries of the SU(d)-normalized matrix.
struct Frontier {
    struct Level {
        std::vector<double> prod;
        std::vector<std::uint32_t> parent;
        std::vector<std::uint16_t> first;
        std::vector<std::uint16_t> last;

        std::size_t size() const { return parent.size(); }
    };

    int dim = 2;
    int width = 4;
    std::vector<Level> levels;

    /// i with L0 = levels[i], L1 = levels[i - 1].
    int half_depth() const { return static_cast<int>(levels.size()) - 1; }
    std::size_t size(int level) const { return levels.at(static_cast<std::size_t>(level)).size(); }
    std::vector<std::size_t> letters(int level, std::size_t idx) const;
    UMat product(int level, std::size_t idx) const;
    std::size_t memory_bytes() const;
};

/// Level 0 only: the empty word.
Frontier make_frontier(const GateSet& gs);
/// L1 <- L0, L0 <- {B L : B != inverse(first letter of L)}, one multiply per child.
Frontier expand_frontier(Frontier f, const GateSet& gs, std::size_t workers = 0);

/// Exact search over letter count. Acceptance is by the phase-invariant
/// distance for d = 2 and by dist_su_d for d > 2 (the metric the embedding
/// realizes); the reported error is always the phase-invariant distance.
/// Frontiers and kd-trees depend only on the gate set and are kept across
/// targets.
class MitmSearcher {
  public:
    explicit MitmSearcher(GateSet gs, Limits limits = {});
    ~MitmSearcher();
    MitmSearcher(MitmSearcher&&) noexcept;
    MitmSearcher& operator=(MitmSearcher&&) noexcept;

    /// Shortest word within eps of the target.
    SynthResult search(const UMat& target, double eps);
    /// Closest word with at most max_vcount letters.
    SynthResult min_error(const UMat& target, int max_vcount);

    const GateSet& gateset() const;
    const Frontier& frontier() const;
    std::size_t memory_bytes() const;
    /// Points in the round-i index, all phase copies counted.
    std::size_t index_points(int round) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SynthResult mitm_search(const UMat& target, double eps, const GateSet& gs, const Limits& limits = {});

/// Reference enumeration of every pruned word up to max_k letters with plain
/// matrix products; same acceptance rule and length order as mitm_search.
SynthResult brute_force_search(const UMat& target, double eps, const GateSet& gs, int max_k);

/// Recomputes the product from scratch. Throws IntegrityError when it
/// differs from the stored error by more than 1e-12, or when an ok result
/// misses its epsilon.
double verify(const SynthResult& result, const UMat& target, const GateSet& gs);

}  // namespace cvsynth
