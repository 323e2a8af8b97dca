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
#include <random>

#include <gtest/gtest.h>

#include "mpsim/canonical.hpp"
#include "mpsim/simple_update.hpp"
#include "oracles.hpp"

namespace {

using mpsim::cplx;
using mpsim::make_gate;
namespace gates = mpsim::gates;

double sv_fidelity(const mpsim::VidalState& s, const mpsim::StateVector& sv) {
    return oracle::fidelity(mpsim::sv_from_mps(s).amplitudes, sv.amplitudes);
}

mpsim::VidalState bell_pair() {
    auto s = mpsim::su_init_zero(2);
    mpsim::su_apply_1q(s, make_gate("h", {0}, gates::h()), 0);
    mpsim::su_apply_2q_adjacent(s, make_gate("cx", {0, 1}, gates::cx()), 0);
    return s;
}

TEST(SuInit, ZeroState) {
    const auto s = mpsim::su_init_zero(3);
    EXPECT_EQ(mpsim::sv_from_mps(s).amplitudes, mpsim::sv_init_zero(3).amplitudes);
    ASSERT_EQ(s.bond_weights.size(), 2U);
    for (const auto& w : s.bond_weights) EXPECT_EQ(w, std::vector<double>({1.0}));
    EXPECT_THROW(mpsim::su_init_zero(0), std::invalid_argument);
}

TEST(SuInit, PlainFormMatchesCanonicalZero) {
    const auto plain = mpsim::su_to_plain_mps(mpsim::su_init_zero(4));
    EXPECT_EQ(plain.sites, mpsim::mps_init_zero(4).sites);
}

TEST(SuOneQubit, XOnMiddleSite) {
    auto s = mpsim::su_init_zero(3);
    mpsim::su_apply_1q(s, make_gate("x", {1}, gates::x()), 1);
    const auto amps = mpsim::sv_from_mps(s).amplitudes;
    EXPECT_EQ(amps[0b010], cplx(1.0));
    EXPECT_THROW(mpsim::su_apply_1q(s, make_gate("x", {0}, gates::x()), 3), std::out_of_range);
}

TEST(SuAdjacent, BellWeights) {
    const auto s = bell_pair();
    ASSERT_EQ(s.bond_weights[0].size(), 2U);
    EXPECT_NEAR(s.bond_weights[0][0], 0.70710678, 1e-8);
    EXPECT_NEAR(s.bond_weights[0][1], 0.70710678, 1e-8);
}

TEST(SuAdjacent, BellMatchesCanonicalEngine) {
    auto cf = mpsim::mps_init_zero(2);
    mpsim::cf_apply_1q(cf, make_gate("h", {0}, gates::h()), 0);
    mpsim::cf_apply_2q_adjacent(cf, make_gate("cx", {0, 1}, gates::cx()), 0);
    EXPECT_NEAR(mpsim::cf_fidelity(cf, mpsim::su_to_plain_mps(bell_pair())), 1.0, 1e-12);
}

TEST(SuAdjacent, OnlyTouchesLocalTensors) {
    std::mt19937_64 gen(61);
    auto s = mpsim::su_run(oracle::random_circuit(7, 40, gen));
    const auto before = s;
    mpsim::su_apply_2q_adjacent(s, make_gate("u4", {3, 4}, oracle::random_unitary(4, gen)), 3);
    for (std::size_t i = 0; i < 7; ++i) {
        if (i == 3 || i == 4) continue;
        EXPECT_EQ(s.sites[i], before.sites[i]) << "site " << i;
    }
    for (std::size_t b = 0; b < 6; ++b) {
        if (b == 3) continue;
        EXPECT_EQ(s.bond_weights[b], before.bond_weights[b]) << "bond " << b;
    }
}

TEST(SuAdjacent, ErrorPaths) {
    auto s = mpsim::su_init_zero(3);
    EXPECT_THROW(mpsim::su_apply_2q_adjacent(s, make_gate("cx", {2, 3}, gates::cx()), 2), mpsim::DimensionError);
    Eigen::MatrixXcd bad = gates::cx() * 2.0;
    EXPECT_THROW(mpsim::su_apply_2q_adjacent(s, make_gate("bad", {0, 1}, bad), 0), mpsim::ValidationError);
}

TEST(SuLongRange, CxAcrossTwoSites) {
    auto s = mpsim::su_init_zero(4);
    mpsim::su_apply_1q(s, make_gate("x", {0}, gates::x()), 0);
    mpsim::su_apply_2q_longrange(s, make_gate("cx", {0, 3}, gates::cx()), 0, 3);
    const auto amps = mpsim::sv_from_mps(s).amplitudes;
    EXPECT_LT(std::abs(amps[0b1001] - cplx(1.0)), 1e-14);
    EXPECT_EQ(s.stats.swap_updates, 4U);
    EXPECT_EQ(s.stats.gate_updates, 1U);
    EXPECT_EQ(s.stats.qr_steps, 0U);
}

TEST(SuLongRange, ErrorPaths) {
    auto s = mpsim::su_init_zero(4);
    EXPECT_THROW(mpsim::su_apply_2q_longrange(s, make_gate("cx", {1, 1}, gates::cx()), 1, 1), mpsim::ValidationError);
    EXPECT_THROW(mpsim::su_apply_2q_longrange(s, make_gate("cx", {0, 4}, gates::cx()), 0, 4), std::out_of_range);
}

TEST(SuExactness, UntruncatedRandomCircuitsMatchStateVector) {
    std::mt19937_64 gen(62);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const auto c = oracle::random_circuit(n, 40, gen);
        const auto s = mpsim::su_run(c);
        EXPECT_NEAR(sv_fidelity(s, mpsim::sv_run(c)), 1.0, 1e-9) << "n=" << n;
        EXPECT_NEAR(mpsim::sv_from_mps(s).norm_squared(), 1.0, 1e-9);
        EXPECT_LT(s.discarded_weight, 1e-24);
    }
}

TEST(SuExactness, VidalConditionsHoldAfterEveryGate) {
    std::mt19937_64 gen(63);
    const auto c = oracle::random_circuit(6, 50, gen);
    auto s = mpsim::su_init_zero(6);
    for (const auto& g : c.gates) {
        mpsim::su_apply(s, g);
        ASSERT_LT(mpsim::su_canonical_deviation(s), 1e-8);
        for (const auto& w : s.bond_weights) {
            double sq = 0.0;
            for (double x : w) sq += x * x;
            EXPECT_NEAR(sq, 1.0, 1e-10);
        }
    }
}

TEST(SuExactness, WeightsEqualSchmidtCoefficients) {
    std::mt19937_64 gen(64);
    const auto c = oracle::random_circuit(6, 40, gen);
    const auto su = mpsim::su_run(c);
    auto cf = mpsim::cf_run(c);
    for (std::size_t b = 0; b < 5; ++b) {
        const auto spectrum = mpsim::cf_bond_spectrum(cf, b);
        const auto& w = su.bond_weights[b];
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double want = k < spectrum.size() ? spectrum[k] : 0.0;
            EXPECT_NEAR(w[k], want, 1e-10) << "bond " << b << " index " << k;
        }
    }
}

TEST(SuTruncation, BondsCappedAndWeightAccumulates) {
    std::mt19937_64 gen(65);
    const auto c = oracle::random_circuit(9, 60, gen);
    mpsim::EngineOptions opt{mpsim::TruncationPolicy(3, 1e-4)};
    auto s = mpsim::su_init_zero(9);
    double last = 0.0;
    for (const auto& g : c.gates) {
        mpsim::su_apply(s, g, opt);
        EXPECT_LE(s.max_bond_dimension(), 3U);
        EXPECT_GE(s.discarded_weight, last);
        last = s.discarded_weight;
    }
    EXPECT_GT(s.discarded_weight, 0.0);
}

TEST(SuAgreement, ShallowAdjacentCircuitsMatchCanonicalEngine) {
    // With only adjacent gates and a modest cap, the two engines should
    // produce nearly the same truncated state.
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto c = mpsim::gen_shallow_random(48, seed);
        mpsim::EngineOptions opt{mpsim::TruncationPolicy(5, 1e-4)};
        const auto cf = mpsim::cf_run(c, opt);
        const auto su = mpsim::su_run(c, opt);
        const auto plain = mpsim::su_to_plain_mps(su);
        const double f = mpsim::cf_fidelity(cf, plain) / (mpsim::mps_norm_squared(cf) * mpsim::mps_norm_squared(plain));
        EXPECT_GT(f, 0.999) << "seed " << seed;
    }
}

TEST(SuFloor, InverseMapsTinyWeightsToZero) {
    std::size_t hits = 0;
    const std::vector<double> w{1.0, 0.5, 1e-13, 0.0};
    const auto inv = mpsim::detail::floored_inverse(w, hits);
    EXPECT_EQ(inv(0), 1.0);
    EXPECT_EQ(inv(1), 2.0);
    EXPECT_EQ(inv(2), 0.0);
    EXPECT_EQ(inv(3), 0.0);
    EXPECT_EQ(hits, 2U);
}

} // namespace
