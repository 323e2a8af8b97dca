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

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpsim/circuit.hpp"
#include "mpsim/gate.hpp"
#include "mpsim/linalg.hpp"
#include "mpsim/mps.hpp"

namespace mpsim {

/// Settings shared by both MPS engines.
struct EngineOptions {
    TruncationPolicy policy;
    /// When false, routing swaps are applied without truncation.
    bool truncate_swaps = true;
    /// Rescale kept singular values to unit squared sum after truncation.
    Renormalize renormalize = Renormalize::yes;
};

namespace detail {

/// Applies a 4x4 gate to a two-site block stored as (left*2) x (2*right),
/// i.e. axes (left, s0, s1, right).
inline void apply_two_site_gate(RowMatrix& theta, const Eigen::MatrixXcd& u, std::size_t left, std::size_t right) {
    const auto r = static_cast<Eigen::Index>(right);
    for (std::size_t a = 0; a < left; ++a) {
        const auto r0 = static_cast<Eigen::Index>(2 * a);
        for (Eigen::Index b = 0; b < r; ++b) {
            const cplx in[4] = {theta(r0, b), theta(r0, r + b), theta(r0 + 1, b), theta(r0 + 1, r + b)};
            cplx out[4];
            for (Eigen::Index k = 0; k < 4; ++k) {
                out[k] = u(k, 0) * in[0] + u(k, 1) * in[1] + u(k, 2) * in[2] + u(k, 3) * in[3];
            }
            theta(r0, b) = out[0];
            theta(r0, r + b) = out[1];
            theta(r0 + 1, b) = out[2];
            theta(r0 + 1, r + b) = out[3];
        }
    }
}

inline void apply_one_site_gate(DenseTensor& site, const Eigen::MatrixXcd& u) {
    const std::size_t left = site.extent(0);
    const std::size_t right = site.extent(2);
    auto d = site.data();
    for (std::size_t a = 0; a < left; ++a) {
        for (std::size_t b = 0; b < right; ++b) {
            cplx& x0 = d[(a * 2 + 0) * right + b];
            cplx& x1 = d[(a * 2 + 1) * right + b];
            const cplx y0 = u(0, 0) * x0 + u(0, 1) * x1;
            const cplx y1 = u(1, 0) * x0 + u(1, 1) * x1;
            x0 = y0;
            x1 = y1;
        }
    }
}

inline void check_site(const MpsState& s, std::size_t i) {
    if (i >= s.num_qubits()) {
        throw std::out_of_range("site " + std::to_string(i) + " out of range for " + std::to_string(s.num_qubits()) +
                                " qubits");
    }
}

/// QR step moving the center from site i to i+1.
inline void shift_center_right(MpsState& s, std::size_t i) {
    auto& cur = s.sites[i];
    auto& nxt = s.sites[i + 1];
    const std::size_t left = cur.extent(0);
    auto qr = qr_matrix(left_matrix(cur));
    const auto k = static_cast<std::size_t>(qr.q.cols());
    RowMatrix merged = qr.r * right_matrix(nxt);
    const std::size_t right = nxt.extent(2);
    cur = site_from(qr.q, left, k);
    nxt = site_from(merged, k, right);
    ++s.stats.qr_steps;
}

/// QR step (on the adjoint) moving the center from site i to i-1.
inline void shift_center_left(MpsState& s, std::size_t i) {
    auto& cur = s.sites[i];
    auto& prv = s.sites[i - 1];
    const std::size_t right = cur.extent(2);
    auto qr = qr_matrix(right_matrix(cur).adjoint());
    const auto k = static_cast<std::size_t>(qr.q.cols());
    RowMatrix merged = left_matrix(prv) * qr.r.adjoint();
    const std::size_t left = prv.extent(0);
    cur = site_from(qr.q.adjoint(), k, right);
    prv = site_from(merged, left, k);
    ++s.stats.qr_steps;
}

} // namespace detail

/// Brings the state into mixed canonical form centered on site m_new. From
/// canonical form this costs |m_old - m_new| QR steps; from plain form it is
/// a full sweep from both ends.
inline void cf_move_center(MpsState& s, std::size_t m_new) {
    detail::check_site(s, m_new);
    if (!s.center) {
        for (std::size_t i = 0; i < m_new; ++i) detail::shift_center_right(s, i);
        for (std::size_t i = s.num_qubits() - 1; i > m_new; --i) detail::shift_center_left(s, i);
        s.center = m_new;
        return;
    }
    for (std::size_t i = *s.center; i < m_new; ++i) detail::shift_center_right(s, i);
    for (std::size_t i = *s.center; i > m_new; --i) detail::shift_center_left(s, i);
    s.center = m_new;
}

/// One-qubit unitaries preserve both canonical conditions, so the form is kept.
inline void cf_apply_1q(MpsState& s, const Gate& g, std::size_t site) {
    detail::check_site(s, site);
    if (g.matrix.rows() != 2 || g.matrix.cols() != 2 || !(unitarity_deviation(g.matrix) <= kUnitarityTolerance)) {
        throw ValidationError("gate '" + g.label + "' is not a 2x2 unitary");
    }
    detail::apply_one_site_gate(s.sites[site], g.matrix);
}

namespace detail {

/// Contract, apply, SVD, truncate, split. U stays on site i, S V^dagger
/// goes to site i+1 which becomes the new center.
inline void cf_two_site_update(MpsState& s, const Eigen::MatrixXcd& u, std::size_t i,
                               const TruncationPolicy& policy, Renormalize renorm) {
    cf_move_center(s, i);
    auto& a = s.sites[i];
    auto& b = s.sites[i + 1];
    const std::size_t left = a.extent(0);
    const std::size_t right = b.extent(2);
    RowMatrix theta = left_matrix(a) * right_matrix(b);
    apply_two_site_gate(theta, u, left, right);

    auto d = svd_matrix(theta);
    const auto plan = plan_truncation(std::span<const double>(d.s.data(), static_cast<std::size_t>(d.s.size())), policy);
    const auto k = static_cast<Eigen::Index>(plan.kept);
    Eigen::VectorXd kept = d.s.head(k);
    if (renorm == Renormalize::yes && plan.kept_weight > 0.0) kept /= std::sqrt(plan.kept_weight);

    RowMatrix right_block = kept.cast<cplx>().asDiagonal() * d.vh.topRows(k);
    a = site_from(d.u.leftCols(k), left, plan.kept);
    b = site_from(right_block, plan.kept, right);
    s.center = i + 1;
    s.discarded_weight += plan.discarded_weight;
}

inline void check_two_qubit(const Gate& g) {
    if (g.matrix.rows() != 4 || g.matrix.cols() != 4 || !(unitarity_deviation(g.matrix) <= kUnitarityTolerance)) {
        throw ValidationError("gate '" + g.label + "' is not a 4x4 unitary");
    }
}

} // namespace detail

/// Gate on sites (i, i+1); the matrix acts on |s_i s_{i+1}>.
inline void cf_apply_2q_adjacent(MpsState& s, const Gate& g, std::size_t i, const EngineOptions& opt = {}) {
    detail::check_site(s, i);
    if (i + 1 >= s.num_qubits()) throw DimensionError("adjacent gate at site " + std::to_string(i) + " has no right neighbour");
    detail::check_two_qubit(g);
    detail::cf_two_site_update(s, g.matrix, i, opt.policy, opt.renormalize);
    ++s.stats.gate_updates;
}

/// Gate on sites i < j via a swap network: the qubit at i is swapped to
/// j-1, the gate is applied on (j-1, j), and the qubit is swapped back.
/// That is 2(j-i-1) swap updates plus one gate update.
inline void cf_apply_2q_longrange(MpsState& s, const Gate& g, std::size_t i, std::size_t j, const EngineOptions& opt = {}) {
    if (i == j) throw ValidationError("two-qubit gate on a single site");
    if (i > j) throw std::invalid_argument("cf_apply_2q_longrange expects i < j");
    detail::check_site(s, j);
    detail::check_two_qubit(g);
    const Eigen::MatrixXcd sw = gates::swap();
    const TruncationPolicy swap_policy = opt.truncate_swaps ? opt.policy : TruncationPolicy::untruncated();
    for (std::size_t k = i; k + 1 < j; ++k) {
        detail::cf_two_site_update(s, sw, k, swap_policy, opt.renormalize);
        ++s.stats.swap_updates;
    }
    detail::cf_two_site_update(s, g.matrix, j - 1, opt.policy, opt.renormalize);
    ++s.stats.gate_updates;
    for (std::size_t k = j - 1; k-- > i;) {
        detail::cf_two_site_update(s, sw, k, swap_policy, opt.renormalize);
        ++s.stats.swap_updates;
    }
}

/// Dispatches on arity and qubit distance.
inline void cf_apply(MpsState& s, const Gate& g, const EngineOptions& opt = {}) {
    g.validate(s.num_qubits());
    if (g.arity() == 1) {
        cf_apply_1q(s, g, g.qubits[0]);
        return;
    }
    const Gate ordered = ascending(g);
    const std::size_t i = ordered.qubits[0];
    const std::size_t j = ordered.qubits[1];
    if (j == i + 1) {
        cf_apply_2q_adjacent(s, ordered, i, opt);
    } else {
        cf_apply_2q_longrange(s, ordered, i, j, opt);
    }
}

inline MpsState cf_run(const Circuit& c, const EngineOptions& opt = {}) {
    MpsState s = mps_init_zero(c.num_qubits);
    for (const auto& g : c.gates) cf_apply(s, g, opt);
    return s;
}

/// Schmidt coefficients across the bond between sites b and b+1. Moves the
/// canonical center to b as a side effect.
inline std::vector<double> cf_bond_spectrum(MpsState& s, std::size_t b) {
    if (b + 1 >= s.num_qubits()) throw std::out_of_range("bond " + std::to_string(b) + " out of range");
    cf_move_center(s, b);
    auto d = detail::svd_matrix(detail::left_matrix(s.sites[b]));
    return {d.s.data(), d.s.data() + d.s.size()};
}

} // namespace mpsim
