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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpsim/canonical.hpp"
#include "mpsim/circuit.hpp"
#include "mpsim/gate.hpp"
#include "mpsim/linalg.hpp"
#include "mpsim/mps.hpp"
#include "mpsim/statevector.hpp"

namespace mpsim {

/// Bond weights at or below this fraction of the largest weight on the same
/// bond are never stored, so dividing them back out is always well defined.
inline constexpr double kPseudoInverseFloor = 1e-12;

/// Vidal form Gamma_1 S^1 Gamma_2 ... S^{N-1} Gamma_N. Site tensors use the
/// same (left, physical, right) layout as MpsState; bond_weights[b] sits
/// between site b and b+1. The outer boundary weights are implicitly (1).
struct VidalState {
    std::vector<DenseTensor> sites;
    std::vector<std::vector<double>> bond_weights;
    double discarded_weight = 0.0;
    UpdateStats stats;

    std::size_t num_qubits() const noexcept { return sites.size(); }

    std::size_t max_bond_dimension() const {
        std::size_t d = 1;
        for (const auto& w : bond_weights) d = std::max(d, w.size());
        return d;
    }

    /// Weight vector to the left of site i ((1) at the boundary).
    std::span<const double> left_weights(std::size_t i) const {
        return i == 0 ? std::span<const double>(kUnit) : std::span<const double>(bond_weights[i - 1]);
    }
    /// Weight vector to the right of site i ((1) at the boundary).
    std::span<const double> right_weights(std::size_t i) const {
        return i + 1 == sites.size() ? std::span<const double>(kUnit) : std::span<const double>(bond_weights[i]);
    }

private:
    static constexpr double kUnit[1] = {1.0};
};

inline VidalState su_init_zero(std::size_t n) {
    if (n == 0) throw std::invalid_argument("a Vidal state needs at least one qubit");
    VidalState s;
    s.sites.assign(n, product_site(1.0, 0.0));
    s.bond_weights.assign(n - 1, std::vector<double>{1.0});
    return s;
}

inline void su_apply_1q(VidalState& s, const Gate& g, std::size_t site) {
    if (site >= s.num_qubits()) throw std::out_of_range("site " + std::to_string(site) + " out of range");
    if (g.matrix.rows() != 2 || g.matrix.cols() != 2 || !(unitarity_deviation(g.matrix) <= kUnitarityTolerance)) {
        throw ValidationError("gate '" + g.label + "' is not a 2x2 unitary");
    }
    detail::apply_one_site_gate(s.sites[site], g.matrix);
}

namespace detail {

/// Reciprocal with the pseudo-inverse floor: weights at or below
/// floor * largest map to 0 and are counted.
inline Eigen::VectorXd floored_inverse(std::span<const double> w, std::size_t& hits) {
    Eigen::VectorXd inv(static_cast<Eigen::Index>(w.size()));
    const double largest = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] > kPseudoInverseFloor * largest) {
            inv(static_cast<Eigen::Index>(k)) = 1.0 / w[k];
        } else {
            inv(static_cast<Eigen::Index>(k)) = 0.0;
            ++hits;
        }
    }
    return inv;
}

/// Steps (b)-(f) of the simple update on sites (i, i+1). Only sites i, i+1
/// and weights i-1, i, i+1 are read; only sites i, i+1 and weight i are written.
inline void su_two_site_update(VidalState& s, const Eigen::MatrixXcd& u, std::size_t i,
                               const TruncationPolicy& policy, Renormalize renorm) {
    auto& ga = s.sites[i];
    auto& gb = s.sites[i + 1];
    const std::size_t left = ga.extent(0);
    const std::size_t mid = ga.extent(2);
    const std::size_t right = gb.extent(2);
    const auto wl = s.left_weights(i);
    const auto wm = s.bond_weights[i];
    const auto wr = s.right_weights(i + 1);

    // (b)-(c): theta = S^{i-1} Gamma_i S^i Gamma_{i+1} S^{i+1}, then the gate.
    RowMatrix x = left_matrix(ga);
    for (std::size_t a = 0; a < left; ++a) x.middleRows(static_cast<Eigen::Index>(2 * a), 2) *= wl[a];
    for (std::size_t m = 0; m < mid; ++m) x.col(static_cast<Eigen::Index>(m)) *= wm[m];
    RowMatrix y = right_matrix(gb);
    for (std::size_t b = 0; b < right; ++b) {
        y.col(static_cast<Eigen::Index>(b)) *= wr[b];
        y.col(static_cast<Eigen::Index>(right + b)) *= wr[b];
    }
    RowMatrix theta = x * y;
    apply_two_site_gate(theta, u, left, right);

    // (d)-(e): SVD, keep at most min(2 D_left, 2 D_right, D_max) values.
    auto d = svd_matrix(theta);
    const auto plan = plan_truncation(std::span<const double>(d.s.data(), static_cast<std::size_t>(d.s.size())),
                                      policy, kPseudoInverseFloor);
    const auto k = static_cast<Eigen::Index>(plan.kept);
    Eigen::VectorXd kept = d.s.head(k);
    if (renorm == Renormalize::yes && plan.kept_weight > 0.0) kept /= std::sqrt(plan.kept_weight);

    // (f): divide the environment weights back out.
    const Eigen::VectorXd inv_l = floored_inverse(wl, s.stats.pinv_floor_hits);
    const Eigen::VectorXd inv_r = floored_inverse(wr, s.stats.pinv_floor_hits);
    RowMatrix new_a = d.u.leftCols(k);
    for (std::size_t a = 0; a < left; ++a) new_a.middleRows(static_cast<Eigen::Index>(2 * a), 2) *= inv_l(static_cast<Eigen::Index>(a));
    RowMatrix new_b = d.vh.topRows(k);
    for (std::size_t b = 0; b < right; ++b) {
        new_b.col(static_cast<Eigen::Index>(b)) *= inv_r(static_cast<Eigen::Index>(b));
        new_b.col(static_cast<Eigen::Index>(right + b)) *= inv_r(static_cast<Eigen::Index>(b));
    }

    ga = site_from(new_a, left, plan.kept);
    gb = site_from(new_b, plan.kept, right);
    s.bond_weights[i].assign(kept.data(), kept.data() + kept.size());
    s.discarded_weight += plan.discarded_weight;
}

} // namespace detail

inline void su_apply_2q_adjacent(VidalState& s, const Gate& g, std::size_t i, const EngineOptions& opt = {}) {
    if (i + 1 >= s.num_qubits()) throw DimensionError("adjacent gate at site " + std::to_string(i) + " has no right neighbour");
    detail::check_two_qubit(g);
    detail::su_two_site_update(s, g.matrix, i, opt.policy, opt.renormalize);
    ++s.stats.gate_updates;
}

/// Same swap network as the canonical engine; every swap and the gate are
/// simple updates, so no QR sweep is ever performed.
inline void su_apply_2q_longrange(VidalState& s, const Gate& g, std::size_t i, std::size_t j, const EngineOptions& opt = {}) {
    if (i == j) throw ValidationError("two-qubit gate on a single site");
    if (i > j) throw std::invalid_argument("su_apply_2q_longrange expects i < j");
    if (j >= s.num_qubits()) throw std::out_of_range("site " + std::to_string(j) + " out of range");
    detail::check_two_qubit(g);
    const Eigen::MatrixXcd sw = gates::swap();
    const TruncationPolicy swap_policy = opt.truncate_swaps ? opt.policy : TruncationPolicy::untruncated();
    for (std::size_t k = i; k + 1 < j; ++k) {
        detail::su_two_site_update(s, sw, k, swap_policy, opt.renormalize);
        ++s.stats.swap_updates;
    }
    detail::su_two_site_update(s, g.matrix, j - 1, opt.policy, opt.renormalize);
    ++s.stats.gate_updates;
    for (std::size_t k = j - 1; k-- > i;) {
        detail::su_two_site_update(s, sw, k, swap_policy, opt.renormalize);
        ++s.stats.swap_updates;
    }
}

inline void su_apply(VidalState& s, const Gate& g, const EngineOptions& opt = {}) {
    g.validate(s.num_qubits());
    if (g.arity() == 1) {
        su_apply_1q(s, g, g.qubits[0]);
        return;
    }
    const Gate ordered = ascending(g);
    const std::size_t i = ordered.qubits[0];
    const std::size_t j = ordered.qubits[1];
    if (j == i + 1) {
        su_apply_2q_adjacent(s, ordered, i, opt);
    } else {
        su_apply_2q_longrange(s, ordered, i, j, opt);
    }
}

inline VidalState su_run(const Circuit& c, const EngineOptions& opt = {}) {
    VidalState s = su_init_zero(c.num_qubits);
    for (const auto& g : c.gates) su_apply(s, g, opt);
    return s;
}

/// Absorbs each S^b into site b+1, giving the plain chain
/// Gamma_1 (S^1 Gamma_2) ... (S^{N-1} Gamma_N).
inline MpsState su_to_plain_mps(const VidalState& s) {
    MpsState out;
    out.sites = s.sites;
    for (std::size_t i = 1; i < out.sites.size(); ++i) {
        auto& site = out.sites[i];
        const auto& w = s.bond_weights[i - 1];
        auto m = site.as_matrix(static_cast<Eigen::Index>(site.extent(0)), static_cast<Eigen::Index>(2 * site.extent(2)));
        for (std::size_t a = 0; a < w.size(); ++a) m.row(static_cast<Eigen::Index>(a)) *= w[a];
    }
    out.discarded_weight = s.discarded_weight;
    out.stats = s.stats;
    return out;
}

/// Largest deviation of the Vidal-derived tensors from canonical form:
/// S^{i-1} Gamma_i must be left-normalized and Gamma_i S^i right-normalized.
inline double su_canonical_deviation(const VidalState& s) {
    double dev = 0.0;
    for (std::size_t i = 0; i < s.num_qubits(); ++i) {
        const auto& g = s.sites[i];
        const auto wl = s.left_weights(i);
        const auto wr = s.right_weights(i);
        DenseTensor a = g;
        DenseTensor b = g;
        auto am = a.as_matrix(static_cast<Eigen::Index>(g.extent(0) * 2), static_cast<Eigen::Index>(g.extent(2)));
        for (std::size_t l = 0; l < g.extent(0); ++l) am.middleRows(static_cast<Eigen::Index>(2 * l), 2) *= wl[l];
        auto bm = b.as_matrix(static_cast<Eigen::Index>(g.extent(0) * 2), static_cast<Eigen::Index>(g.extent(2)));
        for (std::size_t r = 0; r < g.extent(2); ++r) bm.col(static_cast<Eigen::Index>(r)) *= wr[r];
        dev = std::max({dev, left_canonical_deviation(a), right_canonical_deviation(b)});
    }
    return dev;
}

inline StateVector sv_from_mps(const VidalState& s) { return sv_from_mps(su_to_plain_mps(s)); }

} // namespace mpsim
