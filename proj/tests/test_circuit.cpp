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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "mpsim/circuit.hpp"
#include "mpsim/rng.hpp"

namespace {

bool same_circuit(const mpsim::Circuit& a, const mpsim::Circuit& b) {
    if (a.num_qubits != b.num_qubits || a.gates.size() != b.gates.size()) return false;
    for (std::size_t k = 0; k < a.gates.size(); ++k) {
        if (a.gates[k].qubits != b.gates[k].qubits || a.gates[k].matrix != b.gates[k].matrix) return false;
    }
    return true;
}

TEST(Rng, SameSeedSameStream) {
    mpsim::Rng a(42);
    mpsim::Rng b(42);
    for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next_u64(), b.next_u64());
    mpsim::Rng c(43);
    EXPECT_NE(mpsim::Rng(42).next_u64(), c.next_u64());
}

TEST(Rng, UniformAndIndexRanges) {
    mpsim::Rng r(7);
    std::vector<int> counts(5, 0);
    for (int k = 0; k < 50000; ++k) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const auto i = r.index(5);
        ASSERT_LT(i, 5U);
        ++counts[i];
    }
    for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, NormalMoments) {
    mpsim::Rng r(8);
    double s = 0.0;
    double s2 = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Haar, UnitaryAndDeterministic) {
    mpsim::Rng a(1);
    mpsim::Rng b(1);
    for (int k = 0; k < 50; ++k) {
        const auto u = mpsim::haar_random_unitary(4, a);
        EXPECT_LT(mpsim::unitarity_deviation(u), 1e-13);
        EXPECT_EQ(u, mpsim::haar_random_unitary(4, b));
    }
    EXPECT_THROW(mpsim::haar_random_unitary(3, a), std::invalid_argument);
}

TEST(Haar, TraceSecondMomentIsOne) {
    // For Haar measure on U(d), E|tr U|^2 = 1.
    mpsim::Rng rng(2);
    const int samples = 4000;
    double acc = 0.0;
    for (int k = 0; k < samples; ++k) acc += std::norm(mpsim::haar_random_unitary(4, rng).trace());
    EXPECT_NEAR(acc / samples, 1.0, 0.15);
}

TEST(Haar, EigenphasesUniformByKolmogorovSmirnov) {
    // Single eigenphases of a Haar unitary are marginally uniform on (-pi, pi].
    mpsim::Rng rng(3);
    std::vector<double> phases;
    for (int k = 0; k < 2000; ++k) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(mpsim::haar_random_unitary(4, rng));
        for (Eigen::Index i = 0; i < 4; ++i) phases.push_back(std::arg(es.eigenvalues()(i)));
    }
    std::sort(phases.begin(), phases.end());
    double d = 0.0;
    const double m = static_cast<double>(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const double cdf = (phases[i] + std::numbers::pi) / (2 * std::numbers::pi);
        d = std::max({d, std::abs(cdf - static_cast<double>(i) / m), std::abs(cdf - static_cast<double>(i + 1) / m)});
    }
    EXPECT_LT(d, 0.05);
}

TEST(Shallow, EightQubitExample) {
    const auto c = mpsim::gen_shallow_random(8, 0);
    EXPECT_EQ(c.num_qubits, 8U);
    ASSERT_EQ(c.gates.size(), 8U);
    for (const auto& g : c.gates) {
        ASSERT_EQ(g.arity(), 2U);
        EXPECT_EQ(g.qubits[1], g.qubits[0] + 1);
        EXPECT_LT(mpsim::unitarity_deviation(g.matrix), 1e-12);
    }
    c.validate();
}

TEST(Shallow, DeterministicPerSeed) {
    EXPECT_TRUE(same_circuit(mpsim::gen_shallow_random(64, 5), mpsim::gen_shallow_random(64, 5)));
    EXPECT_FALSE(same_circuit(mpsim::gen_shallow_random(64, 5), mpsim::gen_shallow_random(64, 6)));
}

TEST(Shallow, BondIndicesCoverAllBonds) {
    const auto c = mpsim::gen_shallow_random(2000, 9);
    std::vector<int> hits(1999, 0);
    for (const auto& g : c.gates) ++hits[g.qubits[0]];
    const auto covered = std::count_if(hits.begin(), hits.end(), [](int h) { return h > 0; });
    // Expected coverage is 1 - (1 - 1/1999)^2000 ~ 0.632.
    EXPECT_NEAR(static_cast<double>(covered) / 1999.0, 0.632, 0.05);
}

TEST(Shallow, CxVariant) {
    const auto c = mpsim::gen_shallow_random(16, 1, mpsim::TwoQubitKind::cx);
    for (const auto& g : c.gates) EXPECT_EQ(g.matrix, mpsim::gates::cx());
    EXPECT_THROW(mpsim::gen_shallow_random(1, 0), std::invalid_argument);
}

TEST(QuantumVolume, EightQubitsDepthOne) {
    const auto c = mpsim::gen_quantum_volume(8, 1, 0);
    ASSERT_EQ(c.gates.size(), 4U);
    std::set<std::size_t> used;
    for (const auto& g : c.gates) {
        ASSERT_EQ(g.arity(), 2U);
        used.insert(g.qubits.begin(), g.qubits.end());
    }
    EXPECT_EQ(used.size(), 8U);
}

TEST(QuantumVolume, FifteenQubitsLeaveOneIdlePerLayer) {
    for (std::size_t depth = 1; depth <= 6; ++depth) {
        const auto c = mpsim::gen_quantum_volume(15, depth, 11);
        ASSERT_EQ(c.gates.size(), 7 * depth);
        for (std::size_t layer = 0; layer < depth; ++layer) {
            std::set<std::size_t> used;
            for (std::size_t k = 0; k < 7; ++k) {
                const auto& g = c.gates[layer * 7 + k];
                used.insert(g.qubits.begin(), g.qubits.end());
            }
            EXPECT_EQ(used.size(), 14U);
        }
    }
}

TEST(QuantumVolume, DeterministicAndSeedSensitive) {
    EXPECT_TRUE(same_circuit(mpsim::gen_quantum_volume(15, 3, 4), mpsim::gen_quantum_volume(15, 3, 4)));
    EXPECT_FALSE(same_circuit(mpsim::gen_quantum_volume(15, 3, 4), mpsim::gen_quantum_volume(15, 3, 5)));
    EXPECT_THROW(mpsim::gen_quantum_volume(15, 0, 0), std::invalid_argument);
}

TEST(QuantumVolume, PairsAreUniform) {
    // Over many layers every unordered pair of 4 qubits should appear about
    // equally often (1/3 of layers pair qubit 0 with each other qubit).
    std::vector<int> partner(4, 0);
    const int layers = 6000;
    const auto c = mpsim::gen_quantum_volume(4, layers, 21);
    for (std::size_t k = 0; k < c.gates.size(); k += 2) {
        for (std::size_t j = k; j < k + 2; ++j) {
            const auto& q = c.gates[j].qubits;
            if (q[0] == 0) ++partner[q[1]];
            if (q[1] == 0) ++partner[q[0]];
        }
    }
    for (int p = 1; p < 4; ++p) EXPECT_NEAR(partner[p] / static_cast<double>(layers), 1.0 / 3.0, 0.03);
}

} // namespace
