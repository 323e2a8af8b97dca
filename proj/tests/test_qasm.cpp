// Copyright 2026 The mpsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "mpsim/qasm.hpp"
#include "mpsim/statevector.hpp"
#include "oracles.hpp"

namespace {

using mpsim::cplx;

const std::string kFixtures = MPSIM_FIXTURE_DIR;
const std::string kHeader = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

Eigen::MatrixXcd toffoli_matrix() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(8, 8);
    m(6, 6) = m(7, 7) = 0.0;
    m(6, 7) = m(7, 6) = 1.0;
    return m;
}

Eigen::MatrixXcd qft_matrix(std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Eigen::MatrixXcd f(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            f(k, j) = std::polar(1.0 / std::sqrt(static_cast<double>(dim)),
                                 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(dim));
        }
    }
    return f;
}

Eigen::VectorXcd basis(std::size_t n, std::size_t idx) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
    v(static_cast<Eigen::Index>(idx)) = 1.0;
    return v;
}

double run_and_compare(const mpsim::Circuit& c, const Eigen::VectorXcd& want) {
    return (oracle::to_eigen(mpsim::sv_run(c)) - want).norm();
}

TEST(QasmText, BellProgram) {
    const auto c = mpsim::parse_qasm(kHeader + "qreg q[2]; h q[0]; cx q[0],q[1];");
    EXPECT_EQ(c.num_qubits, 2U);
    ASSERT_EQ(c.gates.size(), 2U);
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd want(4);
    want << h, 0.0, 0.0, h;
    EXPECT_LT(run_and_compare(c, want), 1e-12);
}

TEST(QasmText, ToffoliDecomposition) {
    const auto c = mpsim::parse_qasm(kHeader + "qreg q[3]; ccx q[0],q[1],q[2];");
    std::size_t cx = 0;
    std::size_t one = 0;
    for (const auto& g : c.gates) {
        if (g.arity() == 2) {
            EXPECT_EQ(g.matrix, mpsim::gates::cx());
            ++cx;
        } else {
            ++one;
        }
    }
    EXPECT_EQ(cx, 6U);
    EXPECT_EQ(one, 9U);
    EXPECT_LT((oracle::circuit_unitary(c) - toffoli_matrix()).norm(), 1e-10);
}

TEST(QasmText, ControlledSwapMatchesDenseFredkin) {
    const auto c = mpsim::parse_qasm(kHeader + "qreg q[3]; cswap q[0],q[1],q[2];");
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Identity(8, 8);
    f(5, 5) = f(6, 6) = 0.0;
    f(5, 6) = f(6, 5) = 1.0;
    EXPECT_LT((oracle::circuit_unitary(c) - f).norm(), 1e-10);
}

TEST(QasmText, MeasureThenGateIsRejected) {
    const std::string src = kHeader + "qreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\nh q[0];\n";
    try {
        mpsim::parse_qasm(src);
        FAIL() << "expected an unsupported-feature error";
    } catch (const mpsim::UnsupportedFeatureError& e) {
        EXPECT_EQ(e.line(), 6U);
        EXPECT_NE(e.feature().find("mid-circuit measurement"), std::string::npos);
    }
}

TEST(QasmText, TerminalMeasurementIsAccepted) {
    const auto c = mpsim::parse_qasm(kHeader + "qreg q[2]; creg c[2]; h q[0]; measure q[0] -> c[0]; x q[1]; measure q -> c;");
    EXPECT_EQ(c.gates.size(), 2U);
}

TEST(QasmText, UnknownGateReportsPosition) {
    try {
        mpsim::parse_qasm(kHeader + "qreg q[2];\n  foo q[0];\n");
        FAIL() << "expected a parse error";
    } catch (const mpsim::ParseError& e) {
        EXPECT_EQ(e.line(), 4U);
        EXPECT_EQ(e.column(), 3U);
        EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
    }
}

TEST(QasmText, MalformedSyntaxIsAParseError) {
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg q[2]; h q[0]"), mpsim::ParseError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg q[2]; h q[5];"), mpsim::ParseError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg q[2]; cx q[0];"), mpsim::ParseError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg q[2]; rx q[0];"), mpsim::ParseError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg q[2]; cx q[0], q[0];"), mpsim::ParseError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg q[2]; h r[0];"), mpsim::ParseError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg q[2]; rx(foo) q[0];"), mpsim::ParseError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg q[2]; h q[0]; $"), mpsim::ParseError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader), mpsim::ParseError);
}

TEST(QasmText, UnsupportedStatements) {
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg q[1]; reset q[0];"), mpsim::UnsupportedFeatureError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg q[1]; creg c[1]; if (c==1) x q[0];"), mpsim::UnsupportedFeatureError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "opaque magic a;"), mpsim::UnsupportedFeatureError);
    EXPECT_THROW(mpsim::parse_qasm("OPENQASM 3.0;\nqreg q[1];"), mpsim::UnsupportedFeatureError);
    EXPECT_THROW(mpsim::parse_qasm("OPENQASM 2.0;\ninclude \"other.inc\";\nqreg q[1];"), mpsim::UnsupportedFeatureError);
}

TEST(QasmText, ParameterExpressions) {
    const auto c = mpsim::parse_qasm(kHeader + "qreg q[1]; rz(-pi/4 + 2*0.5^2) q[0]; u3(sin(pi/6), cos(0), sqrt(4)/ln(exp(2))) q[0];");
    ASSERT_EQ(c.gates.size(), 2U);
    EXPECT_LT((c.gates[0].matrix - mpsim::gates::rz(-std::numbers::pi / 4 + 0.5)).norm(), 1e-14);
    EXPECT_LT((c.gates[1].matrix - mpsim::gates::u3(0.5, 1.0, 1.0)).norm(), 1e-14);
}

TEST(QasmText, RegisterBroadcastAndBarrier) {
    const auto c = mpsim::parse_qasm(kHeader + "qreg a[3]; qreg b[3]; h a; barrier a, b; cx a, b; cx a[0], b;");
    EXPECT_EQ(c.num_qubits, 6U);
    ASSERT_EQ(c.gates.size(), 9U);
    // Registers are laid out in declaration order: a -> 0..2, b -> 3..5.
    EXPECT_EQ(c.gates[3].qubits, std::vector<std::size_t>({0, 3}));
    EXPECT_EQ(c.gates[5].qubits, std::vector<std::size_t>({2, 5}));
    EXPECT_EQ(c.gates[8].qubits, std::vector<std::size_t>({0, 5}));
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "qreg a[2]; qreg b[3]; cx a, b;"), mpsim::ParseError);
}

TEST(QasmText, UserGateDefinitionsExpand) {
    const std::string src = kHeader +
                            "gate bell a, b { h a; cx a, b; }\n"
                            "gate twice(theta) a { rx(theta) a; rx(theta) a; }\n"
                            "qreg q[3];\n"
                            "bell q[2], q[0];\n"
                            "twice(pi/2) q[1];\n";
    const auto c = mpsim::parse_qasm(src);
    ASSERT_EQ(c.gates.size(), 4U);
    EXPECT_EQ(c.gates[1].qubits, std::vector<std::size_t>({2, 0}));
    // rx(pi/2) twice is rx(pi) = -iX.
    Eigen::MatrixXcd prod = c.gates[3].matrix * c.gates[2].matrix;
    EXPECT_LT((prod - mpsim::gates::rx(std::numbers::pi)).norm(), 1e-14);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "gate h a { x a; }\nqreg q[1];"), mpsim::ParseError);
    EXPECT_THROW(mpsim::parse_qasm(kHeader + "gate g a { cx a, b; }\nqreg q[2]; g q[0];"), mpsim::ParseError);
}

TEST(QasmText, CommentsAndScientificNumbers) {
    const auto c = mpsim::parse_qasm("// leading comment\n" + kHeader + "qreg q[1]; // trailing\nrz(1.5e-1) q[0];\n");
    ASSERT_EQ(c.gates.size(), 1U);
    EXPECT_LT((c.gates[0].matrix - mpsim::gates::rz(0.15)).norm(), 1e-15);
}

TEST(QasmText, LibraryGatesMatchDefinitions) {
    // Every builtin, invoked by name, must equal the textbook matrix.
    const double a = 0.37;
    const double b = -1.1;
    const double l = 2.3;
    const std::vector<std::pair<std::string, Eigen::MatrixXcd>> one{
        {"id", mpsim::gates::identity2()}, {"x", mpsim::gates::x()},     {"y", mpsim::gates::y()},
        {"z", mpsim::gates::z()},          {"h", mpsim::gates::h()},     {"s", mpsim::gates::s()},
        {"sdg", mpsim::gates::sdg()},      {"t", mpsim::gates::t()},     {"tdg", mpsim::gates::tdg()},
        {"sx", mpsim::gates::sx()}};
    for (const auto& [name, m] : one) {
        const auto c = mpsim::parse_qasm(kHeader + "qreg q[1]; " + name + " q[0];");
        ASSERT_EQ(c.gates.size(), 1U) << name;
        EXPECT_LT((c.gates[0].matrix - m).norm(), 1e-15) << name;
    }
    const auto p = mpsim::parse_qasm(kHeader + "qreg q[2]; u3(0.37,-1.1,2.3) q[0]; u2(-1.1,2.3) q[0]; u1(2.3) q[0];"
                                               "rx(0.37) q[0]; ry(0.37) q[0]; cu1(2.3) q[0],q[1]; crz(0.37) q[0],q[1];"
                                               "rzz(0.37) q[0],q[1]; cz q[0],q[1]; swap q[0],q[1];");
    ASSERT_EQ(p.gates.size(), 10U);
    EXPECT_LT((p.gates[0].matrix - mpsim::gates::u3(a, b, l)).norm(), 1e-15);
    EXPECT_LT((p.gates[1].matrix - mpsim::gates::u2(b, l)).norm(), 1e-15);
    // u1 is diag(1, e^{i lambda}).
    Eigen::MatrixXcd u1 = Eigen::MatrixXcd::Identity(2, 2);
    u1(1, 1) = std::polar(1.0, l);
    EXPECT_LT((p.gates[2].matrix - u1).norm(), 1e-15);
    // rx and ry against their exponential forms.
    Eigen::MatrixXcd rx(2, 2);
    rx << std::cos(a / 2), cplx(0, -std::sin(a / 2)), cplx(0, -std::sin(a / 2)), std::cos(a / 2);
    EXPECT_LT((p.gates[3].matrix - rx).norm(), 1e-15);
    Eigen::MatrixXcd ry(2, 2);
    ry << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
    EXPECT_LT((p.gates[4].matrix - ry).norm(), 1e-15);
    Eigen::MatrixXcd cu1 = Eigen::MatrixXcd::Identity(4, 4);
    cu1(3, 3) = std::polar(1.0, l);
    EXPECT_LT((p.gates[5].matrix - cu1).norm(), 1e-15);
}

// ------------------------------------------------------------------ fixtures

TEST(QasmFixtures, Bell) {
    const auto c = mpsim::parse_qasm_file(kFixtures + "/bell.qasm");
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_LT(run_and_compare(c, h * (basis(2, 0) + basis(2, 3))), 1e-10);
}

TEST(QasmFixtures, Ghz) {
    const auto c = mpsim::parse_qasm_file(kFixtures + "/ghz.qasm");
    ASSERT_EQ(c.num_qubits, 6U);
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_LT(run_and_compare(c, h * (basis(6, 0) + basis(6, 63))), 1e-10);
}

TEST(QasmFixtures, Toffoli) {
    const auto c = mpsim::parse_qasm_file(kFixtures + "/toffoli.qasm");
    // x q0; h q1 prepares (|100> + |110>)/sqrt2; Toffoli flips q2 on |110>.
    Eigen::MatrixXcd pre = oracle::embed(mpsim::make_gate("h", {1}, mpsim::gates::h()), 3) *
                           oracle::embed(mpsim::make_gate("x", {0}, mpsim::gates::x()), 3);
    const Eigen::VectorXcd want = toffoli_matrix() * pre * basis(3, 0);
    EXPECT_LT(run_and_compare(c, want), 1e-10);
}

TEST(QasmFixtures, Qft4) {
    const auto c = mpsim::parse_qasm_file(kFixtures + "/qft4.qasm");
    ASSERT_EQ(c.num_qubits, 4U);
    // Input |1010> = |10>.
    const Eigen::VectorXcd want = qft_matrix(4) * basis(4, 10);
    EXPECT_LT(run_and_compare(c, want), 1e-10);
}

TEST(QasmFixtures, MidCircuitMeasurementRejected) {
    try {
        mpsim::parse_qasm_file(kFixtures + "/midcircuit_measure.qasm");
        FAIL() << "expected an unsupported-feature error";
    } catch (const mpsim::UnsupportedFeatureError& e) {
        EXPECT_EQ(e.line(), 7U);
        EXPECT_NE(std::string(e.what()).find("unsupported feature: mid-circuit measurement"), std::string::npos);
    }
}

TEST(QasmFixtures, MissingFile) {
    EXPECT_THROW(mpsim::parse_qasm_file(kFixtures + "/does_not_exist.qasm"), std::runtime_error);
}

} // namespace
