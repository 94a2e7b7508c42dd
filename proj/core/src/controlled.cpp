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

#include "cvsynth/controlled.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cvsynth/error.hpp"
#include "cvsynth/gateset.hpp"

namespace cvsynth {

namespace {

using Blocks = std::vector<UMat>;

std::size_t block_count(int n) { return std::size_t{1} << (n - 1); }

UMat I2() { return identity(2); }

// Ordered product of xs[k] over k ascending with star(k, l) == bit.
UMat parity_product(const Blocks& xs, std::size_t l, int bit) {
    UMat p = I2();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (star(k, l) == bit) p = p * xs[k];
    }
    return p;
}

UMat root(const UMat& m, const std::string& what) {
    try {
        return sqrt_su2(m);
    } catch (const BranchAmbiguityError&) {
        throw BranchAmbiguityError("square root of " + what + " is ambiguous (product is -I)");
    }
}

std::string pair_name(std::size_t width, std::size_t a, std::size_t b) {
    return "B" + std::to_string(a) + " B" + std::to_string(b) + " at width " + std::to_string(width);
}

// Solves parity_product(x, l, 1)^dagger parity_product(x, l, 0) = b[l] for
// every l. Closed forms for 1, 2 and 4 unknowns.
Blocks solve_pairs(const Blocks& b, std::size_t width) {
    const std::size_t m = b.size();
    if (m == 1) return {b[0]};
    if (m == 2) {
        const UMat y = root(b[0] * b[1], pair_name(width, 0, 1));
        return {y, y * dagger(b[1])};
    }
    if (m == 4) {
        const Blocks y = solve_pairs({b[0], b[2]}, width);
        const UMat w = y[1] * root(b[1] * b[3], pair_name(width, 1, 3)) * dagger(b[3]);
        const UMat x2 = root(w, "the width-" + std::to_string(width) + " x2 square");
        const UMat p = dagger(x2) * y[1] * b[1] * dagger(x2);
        const UMat x0 = root(y[0] * p, "the width-" + std::to_string(width) + " x0 square");
        return {x0, dagger(x0) * y[0], x2, dagger(x2) * y[1]};
    }
    throw UnsupportedError("no closed form for " + std::to_string(m) + " coupled blocks");
}

// t[j] = A_0^dagger A_j. Returns beta with beta[0] = I.
Blocks solve_factors(const Blocks& t) {
    const std::size_t n = t.size();
    if (n == 1) return {I2()};
    const std::size_t m = n / 2;
    Blocks b(m);
    for (std::size_t l = 0; l < m; ++l) b[l] = dagger(t[l]) * t[m + l];
    const Blocks x = solve_pairs(b, n);

    Blocks low(m);
    for (std::size_t l = 0; l < m; ++l) low[l] = t[l] * dagger(parity_product(x, l, 1));
    Blocks beta = solve_factors(low);
    beta.resize(n);
    for (std::size_t k = 0; k < m; ++k) beta[m + k] = x[k];
    return beta;
}

// Control qubits whose bit is set in i; qubit 0 is the most significant.
std::vector<int> parity_qubits(int n, std::size_t i) {
    const int m = n - 1;
    std::vector<int> qs;
    for (int q = 0; q < m; ++q) {
        if ((i >> (m - 1 - q)) & 1U) qs.push_back(q);
    }
    return qs;
}

std::size_t letter_for(const GateSet& gs, Axis axis, int sign) {
    const UMat want = gates::v_matrix(axis, sign);
    for (std::size_t k = 0; k < gs.basis().size(); ++k) {
        if ((gs.basis()[k].matrix - want).cwiseAbs().maxCoeff() < Tolerances::reconstruction) return k;
    }
    throw ValidationError("single-qubit basis lacks a V letter");
}

std::size_t identity_suffix(const GateSet& gs) {
    for (std::size_t k = 0; k < gs.suffixes().size(); ++k) {
        if (dist_phase_invariant(gs.suffixes()[k].matrix, I2()) < Tolerances::reconstruction) return k;
    }
    throw ValidationError("suffix set lacks the identity");
}

bool near_identity(const UMat& m) { return (m - I2()).cwiseAbs().maxCoeff() < Tolerances::reconstruction; }

}  // namespace

int star(unsigned long long i, unsigned long long j) { return std::popcount(i & j) & 1; }

std::set<unsigned long long> controlled_index_set(int n, unsigned long long j, int x) {
    if (n < 1 || n > 62) throw ValidationError("index set needs 1 <= n <= 62");
    std::set<unsigned long long> out;
    for (unsigned long long y = 1ULL << (n - 1); y < (1ULL << n); ++y) {
        if (star(y, j) == x) out.insert(y);
    }
    return out;
}

GeneralizedControlled GeneralizedControlled::make(int n, std::vector<UMat> blocks) {
    if (n < 2 || n > 10) throw ValidationError("generalized controlled gate needs 2 <= n <= 10");
    if (blocks.size() != block_count(n)) {
        throw DimensionMismatch("expected " + std::to_string(block_count(n)) + " blocks for n = " + std::to_string(n) +
                                ", got " + std::to_string(blocks.size()));
    }
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        if (blocks[j].rows() != 2 || blocks[j].cols() != 2) {
            throw DimensionMismatch("block " + std::to_string(j) + " is not 2x2");
        }
        if (!is_unitary(blocks[j], Tolerances::validation)) {
            throw ValidationError("block " + std::to_string(j) + " is not unitary");
        }
    }
    const Complex d0 = blocks[0].determinant();
    for (std::size_t j = 1; j < blocks.size(); ++j) {
        if (std::abs(blocks[j].determinant() - d0) > Tolerances::validation) {
            throw ValidationError("blocks 0 and " + std::to_string(j) +
                                  " have different determinants; the direct sum is not special-unitary up to phase");
        }
    }
    GeneralizedControlled g;
    g.n = n;
    g.phase = std::sqrt(d0);
    for (auto& b : blocks) b /= g.phase;
    g.blocks = std::move(blocks);
    return g;
}

UMat GeneralizedControlled::matrix() const {
    const auto dim = static_cast<Eigen::Index>(2 * blocks.size());
    UMat m = UMat::Zero(dim, dim);
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        const auto o = static_cast<Eigen::Index>(2 * j);
        m.block(o, o, 2, 2) = blocks[j];
    }
    return m;
}

UMat controlled_factor(int n, const UMat& x0, const UMat& x1, unsigned long long i) {
    const std::size_t nb = block_count(n);
    UMat m = UMat::Zero(static_cast<Eigen::Index>(2 * nb), static_cast<Eigen::Index>(2 * nb));
    for (std::size_t j = 0; j < nb; ++j) {
        const auto o = static_cast<Eigen::Index>(2 * j);
        m.block(o, o, 2, 2) = star(i, j) ? x1 : x0;
    }
    return m;
}

UMat DecompositionPlan::reassemble() const {
    UMat m = controlled_factor(n, residual, residual, 0);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) m = m * controlled_factor(n, it->u0, it->u1, it->index);
    return m;
}

DecompositionPlan decompose_generalized(const GeneralizedControlled& g, const DecomposeOptions& opt) {
    if (g.n > 4) throw UnsupportedError("decomposition supports n <= 4");
    if (g.n == 4 && !opt.allow_n4) throw UnsupportedError("n = 4 needs allow_n4");
    const std::size_t nb = g.blocks.size();
    Blocks t(nb);
    for (std::size_t j = 0; j < nb; ++j) t[j] = dagger(g.blocks[0]) * g.blocks[j];
    const Blocks beta = solve_factors(t);

    DecompositionPlan plan;
    plan.n = g.n;
    plan.residual = g.blocks[0];
    for (std::size_t i = nb - 1; i >= 1; --i) plan.factors.push_back({i, beta[i], I2(), beta[i]});
    const double err = reassembly_error(plan, g);
    if (err > Tolerances::plan_reassembly) {
        throw IntegrityError("plan reassembly error " + std::to_string(err));
    }
    return plan;
}

double reassembly_error(const DecompositionPlan& plan, const GeneralizedControlled& g) {
    return (plan.reassemble() - g.matrix()).cwiseAbs().maxCoeff();
}

Circuit remap(const Circuit& c, const std::vector<int>& qubits, int num_qubits) {
    Circuit out;
    out.name = c.name;
    out.num_qubits = num_qubits;
    out.gates.reserve(c.gates.size());
    for (Gate gate : c.gates) {
        for (int& q : gate.qubits) q = qubits.at(static_cast<std::size_t>(q));
        out.gates.push_back(std::move(gate));
    }
    return out;
}

struct ControlledSynthesizer::Impl {
    ControlledOptions opt;
    std::unique_ptr<CcSearcher> cc;
    std::unique_ptr<MitmSearcher> su2;

    CcSearcher& cc_searcher() {
        if (!cc) cc = std::make_unique<CcSearcher>(CcOptions{opt.limits});
        return *cc;
    }
    MitmSearcher& su2_searcher() {
        if (!su2) su2 = std::make_unique<MitmSearcher>(vbasis(1), opt.limits);
        return *su2;
    }

    Segment factor(int n, std::size_t i, const UMat& alpha, double eps) {
        Segment seg;
        seg.kind = Segment::Kind::cc;
        seg.index = i;
        seg.target = alpha;
        seg.epsilon = eps;
        const CcResult r = cc_searcher().search(alpha, eps);
        seg.status = r.status;
        seg.cc_word = r.word;
        seg.stage_error = r.error;
        seg.nodes_expanded = r.nodes_expanded;
        if (r.status != SynthStatus::ok) return seg;

        const UMat k = constraint_product(r.word);
        seg.sign_flip = (k * dagger(alpha)).trace().real() < 0.0;
        const UMat realized = seg.sign_flip ? UMat(-k) : k;
        seg.error =
            dist_phase_invariant(controlled_factor(n, I2(), alpha, i), controlled_factor(n, I2(), realized, i));

        const std::vector<int> qs = parity_qubits(n, i);
        const int c = qs.back();
        Circuit& circ = seg.circuit;
        circ.num_qubits = n;
        circ.name = "cc" + std::to_string(i);
        if (seg.sign_flip) {
            for (int q : qs) circ.gates.push_back(gates::z(q));
        }
        Circuit ladder;
        ladder.num_qubits = n;
        for (int q : qs) {
            if (q != c) ladder.gates.push_back(gates::cnot(q, c));
        }
        circ.append(ladder);
        circ.append(remap(emit_circuit(r.word), {c, n - 1}, n));
        circ.append(ladder);
        seg.vcount = circ.vcount();
        return seg;
    }

    Segment residual(int n, const UMat& target, double eps) {
        Segment seg;
        seg.kind = Segment::Kind::residual;
        seg.target = target;
        seg.epsilon = eps;
        MitmSearcher& s = su2_searcher();
        const SynthResult r = s.search(target, eps);
        seg.status = r.status;
        seg.residual_word = r.word;
        seg.stage_error = r.error;
        seg.nodes_expanded = r.nodes_expanded;
        if (r.status != SynthStatus::ok) return seg;
        seg.error = r.error;
        seg.circuit = remap(word_circuit(s.gateset(), r.word), {n - 1}, n);
        seg.circuit.name = "residual";
        seg.vcount = seg.circuit.vcount();
        return seg;
    }

    // A'^dagger as a single-qubit word over the V letters, freely reduced.
    Segment exact_residual(int n, const CCWord& w) {
        const GateSet& gs = su2_searcher().gateset();
        Word word;
        word.suffix = identity_suffix(gs);
        for (auto it = w.steps.rbegin(); it != w.steps.rend(); ++it) {
            const std::size_t l = letter_for(gs, it->axis, -it->i1);
            if (!word.letters.empty() && gs.inverse_index(word.letters.back()) == l) {
                word.letters.pop_back();
            } else {
                word.letters.push_back(l);
            }
        }
        Segment seg;
        seg.kind = Segment::Kind::residual;
        seg.target = dagger(cc_left_block(w));
        seg.residual_word = word;
        seg.stage_error = dist_phase_invariant(seg.target, word_product(gs, word));
        seg.error = seg.stage_error;
        seg.circuit = remap(word_circuit(gs, word), {n - 1}, n);
        seg.circuit.name = "residual";
        seg.vcount = seg.circuit.vcount();
        return seg;
    }

    ControlledCircuit run(const GeneralizedControlled& g, double eps_factor, double eps_residual, bool narrow) {
        const Blocks beta = solve_factors([&] {
            Blocks t(g.blocks.size());
            for (std::size_t j = 0; j < t.size(); ++j) t[j] = dagger(g.blocks[0]) * g.blocks[j];
            return t;
        }());
        const int n = g.n;
        const std::size_t nb = g.blocks.size();

        ControlledCircuit out;
        out.num_qubits = n;
        out.circuit.num_qubits = n;
        out.circuit.name = "controlled";

        UMat q = I2();
        for (std::size_t i = nb - 1; i >= 1; --i) {
            const UMat alpha = q * beta[i] * dagger(q);
            Segment seg = factor(n, i, alpha, eps_factor);
            const SynthStatus st = seg.status;
            out.nodes_expanded += seg.nodes_expanded;
            out.segments.push_back(std::move(seg));
            if (st != SynthStatus::ok) {
                out.status = st;
                out.message = "factor " + std::to_string(i) + ": " + to_string(st);
                return out;
            }
            q = cc_left_block(out.segments.back().cc_word) * q;
        }

        if (narrow) {
            out.segments.push_back(exact_residual(n, out.segments.back().cc_word));
        } else {
            Segment seg = residual(n, g.blocks[0] * dagger(q), eps_residual);
            const SynthStatus st = seg.status;
            out.nodes_expanded += seg.nodes_expanded;
            out.segments.push_back(std::move(seg));
            if (st != SynthStatus::ok) {
                out.status = st;
                out.message = "residual: " + to_string(st);
                return out;
            }
        }

        for (const auto& seg : out.segments) {
            out.circuit.append(seg.circuit);
            out.vcount += seg.vcount;
            out.error_bound += seg.error;
        }
        out.error = dist_phase_invariant(circuit_unitary(out.circuit), g.matrix());
        if (out.error > out.error_bound + 1e-9) {
            throw IntegrityError("assembled error " + std::to_string(out.error) + " exceeds bound " +
                                 std::to_string(out.error_bound));
        }
        out.status = SynthStatus::ok;
        return out;
    }
};

ControlledSynthesizer::ControlledSynthesizer(ControlledOptions opt) : impl_(std::make_unique<Impl>()) {
    impl_->opt = std::move(opt);
}
ControlledSynthesizer::~ControlledSynthesizer() = default;
ControlledSynthesizer::ControlledSynthesizer(ControlledSynthesizer&&) noexcept = default;
ControlledSynthesizer& ControlledSynthesizer::operator=(ControlledSynthesizer&&) noexcept = default;

CcSearcher& ControlledSynthesizer::cc() { return impl_->cc_searcher(); }
MitmSearcher& ControlledSynthesizer::su2() { return impl_->su2_searcher(); }

ControlledCircuit ControlledSynthesizer::synth_2q(const UMat& a, const UMat& b, double eps) {
    if (!(eps >= Tolerances::epsilon_floor)) throw ValidationError("epsilon below floor");
    const double f = impl_->opt.stage1_fraction;
    if (!(f > 0.0 && f < 1.0)) throw ValidationError("stage1_fraction must lie in (0, 1)");
    const GeneralizedControlled g = GeneralizedControlled::make(2, {a, b});
    if (near_identity(g.blocks[0])) return impl_->run(g, eps, 0.0, true);
    return impl_->run(g, f * eps, (1.0 - f) * eps, false);
}

ControlledCircuit ControlledSynthesizer::synth(const GeneralizedControlled& g, double eps) {
    if (!(eps >= Tolerances::epsilon_floor)) throw ValidationError("epsilon below floor");
    decompose_generalized(g, impl_->opt.decompose);
    const double share = eps / static_cast<double>(g.blocks.size());
    return impl_->run(g, share, share, false);
}

ControlledCircuit ControlledSynthesizer::synth_conjugated(const GeneralizedControlled& g,
                                                          const std::vector<std::pair<int, int>>& cnots, double eps) {
    Circuit layer;
    layer.num_qubits = g.n;
    for (const auto& [c, t] : cnots) {
        if (c < 0 || t < 0 || c >= g.n || t >= g.n || c == t) throw ValidationError("bad CNOT in conjugating layer");
        layer.gates.push_back(gates::cnot(c, t));
    }
    Circuit undo = layer;
    std::reverse(undo.gates.begin(), undo.gates.end());

    ControlledCircuit out = synth(g, eps);
    if (out.status != SynthStatus::ok) return out;
    Circuit full;
    full.num_qubits = g.n;
    full.name = "conjugated";
    full.append(undo);
    full.append(out.circuit);
    full.append(layer);
    const UMat l = circuit_unitary(layer);
    out.circuit = std::move(full);
    out.error = dist_phase_invariant(circuit_unitary(out.circuit), l * g.matrix() * dagger(l));
    return out;
}

ControlledCircuit synth_controlled_2q(const UMat& a, const UMat& b, double eps, const ControlledOptions& opt) {
    ControlledSynthesizer s(opt);
    return s.synth_2q(a, b, eps);
}

ControlledCircuit synth_generalized(const GeneralizedControlled& g, double eps, const ControlledOptions& opt) {
    ControlledSynthesizer s(opt);
    return s.synth(g, eps);
}

}  // namespace cvsynth
