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

#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mpsim/gate.hpp"
#include "mpsim/rng.hpp"

namespace mpsim {

/// Ordered gate list over qubits 0..num_qubits-1. Qubit 0 is the leftmost
/// MPS site and the most significant bit of a state-vector index.
struct Circuit {
    std::size_t num_qubits = 0;
    std::vector<Gate> gates;
    std::string source;

    std::size_t two_qubit_gate_count() const {
        std::size_t n = 0;
        for (const auto& g : gates) n += g.arity() == 2;
        return n;
    }

    void validate() const {
        for (const auto& g : gates) g.validate(num_qubits);
    }
};

/// Haar-distributed dim x dim unitary: QR of a complex Ginibre matrix with
/// the phases of R's diagonal folded back into Q.
inline Eigen::MatrixXcd haar_random_unitary(Eigen::Index dim, Rng& rng) {
    if (dim != 2 && dim != 4) throw std::invalid_argument("haar_random_unitary supports dim 2 or 4");
    Eigen::MatrixXcd z(dim, dim);
    const double scale = 1.0 / std::sqrt(2.0);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(r, c) = cplx(re, im) * scale;
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& packed = qr.matrixQR();
    for (Eigen::Index k = 0; k < dim; ++k) {
        const cplx d = packed(k, k);
        const double mag = std::abs(d);
        q.col(k) *= mag > 0.0 ? d / mag : cplx{1.0};
    }
    return q;
}

enum class TwoQubitKind { haar, cx };

/// n gates, each on an adjacent pair (i, i+1) with i uniform over the n-1
/// bonds. Draw order per gate: the bond index, then the unitary.
inline Circuit gen_shallow_random(std::size_t n, std::uint64_t seed, TwoQubitKind kind = TwoQubitKind::haar) {
    if (n < 2) throw std::invalid_argument("gen_shallow_random needs at least 2 qubits");
    Rng rng(seed);
    Circuit c;
    c.num_qubits = n;
    c.source = "shallow(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) +
               (kind == TwoQubitKind::cx ? ",gate=cx" : ",gate=haar") + ")";
    c.gates.reserve(n);
    for (std::size_t g = 0; g < n; ++g) {
        const auto i = static_cast<std::size_t>(rng.index(n - 1));
        if (kind == TwoQubitKind::cx) {
            c.gates.push_back(make_gate("cx", {i, i + 1}, gates::cx()));
        } else {
            c.gates.push_back(make_gate("su4", {i, i + 1}, haar_random_unitary(4, rng)));
        }
    }
    return c;
}

/// Quantum-volume style circuit: per layer a Fisher-Yates shuffle of the
/// qubits, consecutive entries paired, one Haar SU(4) block per pair.
inline Circuit gen_quantum_volume(std::size_t n, std::size_t depth, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_quantum_volume needs at least 2 qubits");
    if (depth < 1) throw std::invalid_argument("gen_quantum_volume needs depth >= 1");
    Rng rng(seed);
    Circuit c;
    c.num_qubits = n;
    c.source = "quantum_volume(n=" + std::to_string(n) + ",depth=" + std::to_string(depth) +
               ",seed=" + std::to_string(seed) + ")";
    std::vector<std::size_t> perm(n);
    for (std::size_t layer = 0; layer < depth; ++layer) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t k = n - 1; k > 0; --k) {
            std::swap(perm[k], perm[static_cast<std::size_t>(rng.index(k + 1))]);
        }
        for (std::size_t p = 0; p + 1 < n; p += 2) {
            c.gates.push_back(make_gate("su4", {perm[p], perm[p + 1]}, haar_random_unitary(4, rng)));
        }
    }
    return c;
}

} // namespace mpsim
