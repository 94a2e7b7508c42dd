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
#include <fstream>

#include "cvsynth/circuit.hpp"
#include "cvsynth/error.hpp"
#include "cvsynth/gateset.hpp"
#include "oracles.hpp"

using namespace cvsynth;

namespace {

bool in_basis(const GateSet& gs, const UMat& m) {
    for (const auto& e : gs.basis()) {
        if ((e.matrix - m).cwiseAbs().maxCoeff() < 1e-12) return true;
    }
    return false;
}

std::vector<UMat> clifford_generators(int n) {
    std::vector<UMat> out;
    for (int q = 0; q < n; ++q) {
        out.push_back(embed_gate(gates::h(q), n));
        out.push_back(embed_gate(gates::s(q), n));
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) out.push_back(embed_gate(gates::cnot(a, b), n));
    return out;
}

}  // namespace

TEST(Circuit, EmbedGateMatchesKron) {
    const Gate g = gates::v(Axis::y, -1, 1);
    const UMat want = oracle::kron(oracle::kron(oracle::eye(2), oracle::v(oracle::pauli(2), -1)), oracle::eye(2));
    EXPECT_LT((embed_gate(g, 3) - want).norm(), 1e-14);
}

TEST(Circuit, CnotReversedQubits) {
    // CNOT(1,0) = (I + Z) / 2 (x) I + (I - Z) / 2 (x) X with qubit 1 as control.
    const UMat p0 = (oracle::eye(2) + oracle::pauli(3)) / 2.0, p1 = (oracle::eye(2) - oracle::pauli(3)) / 2.0;
    const UMat want = oracle::kron(oracle::eye(2), p0) + oracle::kron(oracle::pauli(1), p1);
    EXPECT_LT((embed_gate(gates::cnot(1, 0), 2) - want).norm(), 1e-14);
}

TEST(Circuit, UnitaryIsReversedProduct) {
    Circuit c;
    c.num_qubits = 1;
    c.gates = {gates::h(0), gates::s(0)};
    EXPECT_LT((circuit_unitary(c) - gates::s(0).matrix * gates::h(0).matrix).norm(), 1e-14);
    EXPECT_EQ(to_text(c, false), "H S");
    EXPECT_EQ(to_text(c), "H(0) S(0)");
}

TEST(VBasis, SingleQubit) {
    const GateSet gs = vbasis(1);
    ASSERT_EQ(gs.basis().size(), 6u);
    EXPECT_EQ(gs.suffixes().size(), 4u);
    std::vector<std::string> labels;
    for (const auto& e : gs.basis()) labels.push_back(e.label);
    EXPECT_EQ(labels, (std::vector<std::string>{"Vx", "Vx'", "Vy", "Vy'", "Vz", "Vz'"}));
    EXPECT_LT((gs.basis()[0].matrix - oracle::v(oracle::pauli(1), 1)).norm(), 1e-15);
}

TEST(VBasis, TwoQubitsBranching) {
    const GateSet gs = vbasis(2);
    ASSERT_EQ(gs.basis().size(), 30u);
    EXPECT_EQ(gs.suffixes().size(), 16u);
    int children = 0;
    for (std::size_t b = 0; b < gs.basis().size(); ++b)
        if (b != gs.inverse_index(0)) ++children;
    EXPECT_EQ(children, 29);
}

TEST(VBasis, TraceIdentity) {
    for (int n : {1, 2, 3}) {
        const GateSet gs = vbasis(n);
        const double d = static_cast<double>(gs.dim());
        for (const auto& e : gs.basis()) {
            EXPECT_LT(unitarity_residual(e.matrix), 1e-14);
            EXPECT_NEAR(std::abs(e.matrix.trace()) / d, 1.0 / std::sqrt(5.0), 1e-14);
            EXPECT_EQ(e.vcount_weight, 1);
        }
    }
    EXPECT_THROW(vbasis(4), Error);
}

TEST(VBasis, CliffordConjugationClosure) {
    for (int n : {1, 2}) {
        const GateSet gs = vbasis(n);
        for (const UMat& c : clifford_generators(n)) {
            for (const auto& e : gs.basis()) EXPECT_TRUE(in_basis(gs, c * e.matrix * c.adjoint())) << e.label;
        }
    }
}

TEST(CcBasis, Identities) {
    const GateSet gs = cc_basis();
    ASSERT_EQ(gs.basis().size(), 12u);
    for (const auto& e : gs.basis()) EXPECT_EQ(e.vcount_weight, 1);
    const UMat zz = oracle::kron(oracle::pauli(3), oracle::pauli(3));
    EXPECT_LT((cc_matrix({Axis::z, 1, -1}) - oracle::v(zz, 1)).norm(), 1e-14);
    EXPECT_LT((cc_matrix({Axis::z, 1, 1}) - oracle::kron(oracle::eye(2), oracle::v(oracle::pauli(3), 1))).norm(), 1e-14);
    for (std::size_t k = 0; k < cc_steps().size(); ++k) {
        EXPECT_LT((cc_matrix(cc_steps()[k]) - gs.basis()[k].matrix).norm(), 1e-14);
    }
}

TEST(CcBasis, Templates) {
    const Circuit z = emit_cc_template(Axis::z, 1, -1);
    EXPECT_EQ(to_text(z), "CNOT(0,1) Vz(1) CNOT(0,1)");
    EXPECT_EQ(z.vcount(), 1);
    const Circuit x = emit_cc_template(Axis::x, 1, -1);
    EXPECT_EQ(x.gates.size(), 5u);
    EXPECT_EQ(x.gates.front().name, "H");
    EXPECT_EQ(x.vcount(), 1);
    EXPECT_EQ(to_text(emit_cc_template(Axis::z, 1, 1)), "Vz(1)");
    for (const auto& s : cc_steps()) {
        const Circuit c = emit_cc_template(s.axis, s.i1, s.i2);
        EXPECT_EQ(c.vcount(), 1);
        EXPECT_LT(dist_phase_invariant(circuit_unitary(c), cc_matrix(s)), 1e-12) << s.label();
    }
}

TEST(Suffixes, Sizes) {
    EXPECT_EQ(suffix_set(SuffixKind::pauli_1q).size(), 4u);
    EXPECT_EQ(suffix_set(SuffixKind::pauli_nq, 2).size(), 16u);
    const auto cl = suffix_set(SuffixKind::clifford_1q_mod_phase);
    ASSERT_EQ(cl.size(), 24u);
    EXPECT_EQ(cl.front().label, "I");
    for (std::size_t i = 0; i < cl.size(); ++i)
        for (std::size_t j = i + 1; j < cl.size(); ++j) EXPECT_GT(dist_phase_invariant(cl[i].matrix, cl[j].matrix), 1e-3);
    EXPECT_EQ(parse_suffix_kind("clifford_1q_mod_phase"), SuffixKind::clifford_1q_mod_phase);
    EXPECT_THROW(parse_suffix_kind("nope"), Error);
}

TEST(GateSetFile, BundledMatchesBuiltin) {
    const GateSet file = load_gateset(std::string(CVSYNTH_GATESET_DIR) + "/vbasis-1q.json");
    const GateSet gs = vbasis(1);
    ASSERT_EQ(file.basis().size(), gs.basis().size());
    ASSERT_EQ(file.suffixes().size(), gs.suffixes().size());
    for (std::size_t k = 0; k < gs.basis().size(); ++k) {
        EXPECT_EQ(file.basis()[k].label, gs.basis()[k].label);
        EXPECT_EQ(file.basis()[k].inverse_label, gs.basis()[k].inverse_label);
        EXPECT_EQ(file.basis()[k].matrix, gs.basis()[k].matrix);
    }
}

TEST(GateSetFile, RoundTrip) {
    const GateSet gs = cc_basis();
    const GateSet back = parse_gateset(dump_gateset(gs));
    ASSERT_EQ(back.basis().size(), gs.basis().size());
    for (std::size_t k = 0; k < gs.basis().size(); ++k) EXPECT_EQ(back.basis()[k].matrix, gs.basis()[k].matrix);
}

TEST(GateSetFile, Errors) {
    const std::string vx = R"([[0.4472135954999579,0],[0,0.8944271909999159],[0,0.8944271909999159],[0.4472135954999579,0]])";
    const std::string vxd = R"([[0.4472135954999579,0],[0,-0.8944271909999159],[0,-0.8944271909999159],[0.4472135954999579,0]])";
    const std::string ok = R"({"dim":2,"elements":[{"label":"Vx","inverse":"Vx'","matrix":)" + vx +
                           R"(},{"label":"Vx'","inverse":"Vx","matrix":)" + vxd + "}]}";
    EXPECT_EQ(parse_gateset(ok).basis().size(), 2u);

    const std::string missing = R"({"dim":2,"elements":[{"label":"Vx","inverse":"Vx'","matrix":)" + vx + "}]}";
    try {
        parse_gateset(missing);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("Vx'"), std::string::npos);
    }

    const std::string bad = R"({"dim":2,"elements":[{"label":"B","inverse":"B","matrix":[[2,0],[0,0],[0,0],[1,0]]}]})";
    try {
        parse_gateset(bad);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("'B'"), std::string::npos);
    }

    std::ifstream in(std::string(CVSYNTH_TEST_DATA) + "/vx_with_extra_key.json");
    const std::string extra((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_THROW(parse_gateset(extra), ParseError);
    EXPECT_THROW(parse_gateset("{"), ParseError);
    EXPECT_THROW(load_gateset("/nonexistent.json"), ParseError);
}

TEST(UnitaryFile, RoundTripAndRejects) {
    const UMat u = haar_random(4, 1);
    EXPECT_EQ(parse_unitary(dump_unitary(u)), u);
    EXPECT_THROW(load_unitary(std::string(CVSYNTH_TEST_DATA) + "/bad.json"), ValidationError);
}
