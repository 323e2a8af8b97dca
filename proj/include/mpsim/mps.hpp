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
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpsim/errors.hpp"
#include "mpsim/tensor.hpp"

namespace mpsim {

/// Counters for the tensor updates performed on a state.
struct UpdateStats {
    std::size_t gate_updates = 0;      ///< two-site updates applying a circuit gate
    std::size_t swap_updates = 0;      ///< two-site updates applying a routing swap
    std::size_t qr_steps = 0;          ///< single-site QR steps moving the canonical center
    std::size_t pinv_floor_hits = 0;   ///< weights below the pseudo-inverse floor during SU reversion

    std::size_t two_site_updates() const noexcept { return gate_updates + swap_updates; }
};

/// Chain of rank-3 site tensors. Each site is stored with axes
/// (left bond, physical, right bond); boundary bonds have extent 1.
///
/// When `center` is set the state is in mixed canonical form: sites left of
/// the center are left-normalized, sites right of it right-normalized, and
/// the center site carries the Schmidt coefficients of both adjacent cuts.
struct MpsState {
    std::vector<DenseTensor> sites;
    std::optional<std::size_t> center;
    double discarded_weight = 0.0;
    UpdateStats stats;

    std::size_t num_qubits() const noexcept { return sites.size(); }
    bool is_canonical() const noexcept { return center.has_value(); }

    std::size_t left_dim(std::size_t i) const { return sites.at(i).extent(0); }
    std::size_t right_dim(std::size_t i) const { return sites.at(i).extent(2); }

    /// Extent of the bond between site b and site b+1.
    std::size_t bond_dimension(std::size_t b) const { return right_dim(b); }

    std::size_t max_bond_dimension() const {
        std::size_t d = 1;
        for (const auto& s : sites) d = std::max(d, s.extent(2));
        return d;
    }

    /// Throws DimensionError if shapes are inconsistent.
    void check_consistency() const {
        if (sites.empty()) throw DimensionError("MPS has no sites");
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const auto& s = sites[i];
            if (s.rank() != 3 || s.extent(1) != 2) {
                throw DimensionError("site " + std::to_string(i) + " has shape " + shape_string(s.shape()));
            }
            if (i + 1 < sites.size() && s.extent(2) != sites[i + 1].extent(0)) {
                throw DimensionError("bond " + std::to_string(i) + " extents disagree");
            }
        }
        if (sites.front().extent(0) != 1 || sites.back().extent(2) != 1) {
            throw DimensionError("boundary bonds must have extent 1");
        }
        if (center && *center >= sites.size()) throw DimensionError("canonical center out of range");
    }
};

/// Site tensor of a product state: a (1, 2, 1) tensor holding the amplitudes.
inline DenseTensor product_site(cplx amp0, cplx amp1) { return DenseTensor({1, 2, 1}, {amp0, amp1}); }

/// |0...0> with all bond extents 1. Trivially canonical with the center at 0.
inline MpsState mps_init_zero(std::size_t n) {
    if (n == 0) throw std::invalid_argument("an MPS needs at least one qubit");
    MpsState state;
    state.sites.assign(n, product_site(1.0, 0.0));
    state.center = 0;
    return state;
}

namespace detail {

/// Site viewed as a (left*2) x right matrix; rows are (left, physical).
inline ConstRowMap left_matrix(const DenseTensor& s) {
    return s.as_matrix(static_cast<Eigen::Index>(s.extent(0) * 2), static_cast<Eigen::Index>(s.extent(2)));
}

/// Site viewed as a left x (2*right) matrix; columns are (physical, right).
inline ConstRowMap right_matrix(const DenseTensor& s) {
    return s.as_matrix(static_cast<Eigen::Index>(s.extent(0)), static_cast<Eigen::Index>(2 * s.extent(2)));
}

template <class Derived>
DenseTensor site_from(const Eigen::MatrixBase<Derived>& m, std::size_t left, std::size_t right) {
    DenseTensor t({left, 2, right});
    t.as_matrix(m.rows(), m.cols()) = m;
    return t;
}

} // namespace detail

/// <a|b> by left-to-right transfer-matrix contraction, O(N D^3).
inline cplx mps_overlap(const MpsState& a, const MpsState& b) {
    if (a.num_qubits() != b.num_qubits()) throw DimensionError("overlap of states with different qubit counts");
    Eigen::MatrixXcd env = Eigen::MatrixXcd::Ones(1, 1);
    for (std::size_t i = 0; i < a.num_qubits(); ++i) {
        const auto& sa = a.sites[i];
        const auto& sb = b.sites[i];
        // env is (left_a x left_b); env * B gives rows a, cols (sigma, right_b).
        RowMatrix t = env * detail::right_matrix(sb);
        ConstRowMap t2(t.data(), t.rows() * 2, static_cast<Eigen::Index>(sb.extent(2)));
        env = detail::left_matrix(sa).adjoint() * t2;
    }
    return env(0, 0);
}

/// |<a|b>|^2. The absolute value is taken before squaring.
inline double cf_fidelity(const MpsState& a, const MpsState& b) {
    const double amp = std::abs(mps_overlap(a, b));
    return amp * amp;
}

inline double mps_norm_squared(const MpsState& s) { return std::real(mps_overlap(s, s)); }

/// max |sum_sigma A^dagger A - I| with A viewed as (left*2) x right.
inline double left_canonical_deviation(const DenseTensor& site) {
    const auto a = detail::left_matrix(site);
    const Eigen::MatrixXcd g = a.adjoint() * a;
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

/// max |sum_sigma B B^dagger - I| with B viewed as left x (2*right).
inline double right_canonical_deviation(const DenseTensor& site) {
    const auto b = detail::right_matrix(site);
    const Eigen::MatrixXcd g = b * b.adjoint();
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

/// Largest deviation of any site from the canonical condition implied by
/// the center. Throws if the state is not in canonical form.
inline double canonical_deviation(const MpsState& s) {
    if (!s.center) throw std::logic_error("state is not in canonical form");
    double dev = 0.0;
    for (std::size_t i = 0; i < s.num_qubits(); ++i) {
        if (i < *s.center) dev = std::max(dev, left_canonical_deviation(s.sites[i]));
        if (i > *s.center) dev = std::max(dev, right_canonical_deviation(s.sites[i]));
    }
    return dev;
}

} // namespace mpsim
