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

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpsim/circuit.hpp"
#include "mpsim/errors.hpp"
#include "mpsim/gate.hpp"
#include "mpsim/mps.hpp"
#include "mpsim/tensor.hpp"

namespace mpsim {

inline constexpr std::size_t kMaxStateVectorQubits = 30;

/// Dense 2^N amplitude vector. Qubit 0 is the most significant bit of the
/// basis index, matching the left-to-right order of MPS sites.
struct StateVector {
    std::size_t num_qubits = 0;
    std::vector<cplx> amplitudes;

    double norm_squared() const {
        double acc = 0.0;
        for (const auto& z : amplitudes) acc += std::norm(z);
        return acc;
    }
};

namespace detail {

inline void check_capacity(std::size_t n) {
    if (n < 1 || n > kMaxStateVectorQubits) {
        throw CapacityError("state vector supports 1.." + std::to_string(kMaxStateVectorQubits) + " qubits, got " +
                            std::to_string(n));
    }
}

inline std::size_t bit_of(std::size_t n, std::size_t qubit) { return std::size_t{1} << (n - 1 - qubit); }

} // namespace detail

inline StateVector sv_init_zero(std::size_t n) {
    detail::check_capacity(n);
    StateVector sv{n, std::vector<cplx>(std::size_t{1} << n, cplx{0.0})};
    sv.amplitudes[0] = 1.0;
    return sv;
}

/// Applies g in place after validating it against the register.
inline void sv_apply(StateVector& sv, const Gate& g) {
    g.validate(sv.num_qubits);
    auto& amp = sv.amplitudes;
    const std::size_t dim = amp.size();
    const Eigen::MatrixXcd& u = g.matrix;
    if (g.arity() == 1) {
        const std::size_t m = detail::bit_of(sv.num_qubits, g.qubits[0]);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            if (idx & m) continue;
            const cplx a0 = amp[idx];
            const cplx a1 = amp[idx | m];
            amp[idx] = u(0, 0) * a0 + u(0, 1) * a1;
            amp[idx | m] = u(1, 0) * a0 + u(1, 1) * a1;
        }
        return;
    }
    const std::size_t ma = detail::bit_of(sv.num_qubits, g.qubits[0]);
    const std::size_t mb = detail::bit_of(sv.num_qubits, g.qubits[1]);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        if (idx & (ma | mb)) continue;
        const std::array<std::size_t, 4> pos{idx, idx | mb, idx | ma, idx | ma | mb};
        std::array<cplx, 4> in{};
        for (std::size_t k = 0; k < 4; ++k) in[k] = amp[pos[k]];
        for (std::size_t r = 0; r < 4; ++r) {
            cplx acc = 0.0;
            for (std::size_t c = 0; c < 4; ++c) acc += u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
            amp[pos[r]] = acc;
        }
    }
}

/// <a|b>, conjugating a.
inline cplx sv_inner(const StateVector& a, const StateVector& b) {
    if (a.num_qubits != b.num_qubits || a.amplitudes.size() != b.amplitudes.size()) {
        throw DimensionError("inner product of state vectors with different sizes");
    }
    cplx acc = 0.0;
    for (std::size_t k = 0; k < a.amplitudes.size(); ++k) acc += std::conj(a.amplitudes[k]) * b.amplitudes[k];
    return acc;
}

/// Contracts the whole chain into 2^N amplitudes.
inline StateVector sv_from_mps(const MpsState& m) {
    detail::check_capacity(m.num_qubits());
    RowMatrix psi = RowMatrix::Ones(1, 1);
    for (const auto& site : m.sites) {
        RowMatrix next = psi * detail::right_matrix(site);
        psi = Eigen::Map<RowMatrix>(next.data(), next.rows() * 2, static_cast<Eigen::Index>(site.extent(2)));
    }
    StateVector sv{m.num_qubits(), std::vector<cplx>(psi.data(), psi.data() + psi.size())};
    return sv;
}

inline StateVector sv_run(const Circuit& c) {
    StateVector sv = sv_init_zero(c.num_qubits);
    for (const auto& g : c.gates) sv_apply(sv, g);
    return sv;
}

} // namespace mpsim
