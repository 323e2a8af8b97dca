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
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "mpsim/errors.hpp"
#include "mpsim/tensor.hpp"

namespace mpsim {

/// m = left_isometry * diag(singular_values) * right_isometry_conjugate.
struct SvdTriple {
    DenseTensor left_isometry;
    std::vector<double> singular_values;
    DenseTensor right_isometry_conjugate;

    std::size_t rank() const noexcept { return singular_values.size(); }
};

/// Governs every SVD truncation: keep at most max_kept values and drop any
/// value whose ratio to the largest is strictly below rel_cutoff.
class TruncationPolicy {
public:
    TruncationPolicy() = default;

    TruncationPolicy(std::size_t max_kept, double rel_cutoff) : max_kept_(max_kept), rel_cutoff_(rel_cutoff) {
        if (max_kept_ < 1) throw std::invalid_argument("max_kept must be at least 1");
        if (!(rel_cutoff_ >= 0.0 && rel_cutoff_ < 1.0)) {
            throw std::invalid_argument("rel_cutoff must lie in [0, 1), got " + std::to_string(rel_cutoff_));
        }
    }

    static TruncationPolicy untruncated() { return {}; }

    std::size_t max_kept() const noexcept { return max_kept_; }
    double rel_cutoff() const noexcept { return rel_cutoff_; }

    friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;

private:
    std::size_t max_kept_ = std::numeric_limits<std::size_t>::max();
    double rel_cutoff_ = 0.0;
};

/// Singular values at or below this fraction of the largest are treated as
/// numerically zero when determining the rank of a decomposition.
inline constexpr double kNumericalRankTolerance = 1e-14;

struct TruncationPlan {
    std::size_t kept = 1;
    double discarded_weight = 0.0;
    double kept_weight = 0.0;
};

/// Decides how many leading values of a non-increasing spectrum survive.
/// `floor` is an extra relative threshold applied on top of the policy.
inline TruncationPlan plan_truncation(std::span<const double> values, const TruncationPolicy& policy,
                                      double floor = kNumericalRankTolerance) {
    TruncationPlan plan;
    if (values.empty()) {
        plan.kept = 0;
        return plan;
    }
    const double largest = values.front();
    std::size_t kept = 1;
    if (largest > 0.0) {
        while (kept < values.size()) {
            const double ratio = values[kept] / largest;
            if (ratio < policy.rel_cutoff() || !(ratio > floor)) break;
            ++kept;
        }
    }
    kept = std::min(kept, policy.max_kept());
    plan.kept = kept;
    for (std::size_t k = 0; k < values.size(); ++k) {
        (k < kept ? plan.kept_weight : plan.discarded_weight) += values[k] * values[k];
    }
    return plan;
}

enum class Renormalize { yes, no };

namespace detail {

struct MatrixSvd {
    Eigen::MatrixXcd u;
    Eigen::VectorXd s;
    Eigen::MatrixXcd vh;
};

inline void require_finite(const Eigen::MatrixXcd& m, const char* what) {
    if (!m.allFinite()) throw NumericError(std::string(what) + " produced non-finite values");
}

/// Thin SVD. Jacobi is used for small problems (the common case inside MPS
/// updates); divide-and-conquer above that.
template <class Derived>
MatrixSvd svd_matrix(const Eigen::MatrixBase<Derived>& m) {
    MatrixSvd out;
    if (m.rows() == 0 || m.cols() == 0) {
        out.u.resize(m.rows(), 0);
        out.s.resize(0);
        out.vh.resize(0, m.cols());
        return out;
    }
    if (!m.allFinite()) throw NumericError("svd input contains non-finite values");
    if (std::min(m.rows(), m.cols()) < 16) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (solver.info() != Eigen::Success) throw NumericError("svd did not converge");
        out.u = solver.matrixU();
        out.s = solver.singularValues();
        out.vh = solver.matrixV().adjoint();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXcd> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (solver.info() != Eigen::Success) throw NumericError("svd did not converge");
        out.u = solver.matrixU();
        out.s = solver.singularValues();
        out.vh = solver.matrixV().adjoint();
    }
    require_finite(out.u, "svd");
    require_finite(out.vh, "svd");
    if (!out.s.allFinite()) throw NumericError("svd produced non-finite singular values");
    return out;
}

struct MatrixQr {
    Eigen::MatrixXcd q;
    Eigen::MatrixXcd r;
};

/// Thin QR: q is rows x k with orthonormal columns, r is k x cols upper
/// triangular, k = min(rows, cols).
template <class Derived>
MatrixQr qr_matrix(const Eigen::MatrixBase<Derived>& m) {
    const Eigen::Index k = std::min(m.rows(), m.cols());
    MatrixQr out;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    out.q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), k);
    out.r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
    require_finite(out.q, "qr");
    require_finite(out.r, "qr");
    return out;
}

} // namespace detail

inline SvdTriple svd(const DenseTensor& m) {
    if (m.rank() != 2) throw RankError("svd expects a matrix, got shape " + shape_string(m.shape()));
    const auto rows = static_cast<Eigen::Index>(m.extent(0));
    const auto cols = static_cast<Eigen::Index>(m.extent(1));
    auto d = detail::svd_matrix(m.as_matrix(rows, cols));
    return SvdTriple{DenseTensor::from_matrix(d.u), std::vector<double>(d.s.data(), d.s.data() + d.s.size()),
                     DenseTensor::from_matrix(d.vh)};
}

/// m = Q R with Q having orthonormal columns.
inline std::pair<DenseTensor, DenseTensor> qr_left(const DenseTensor& m) {
    if (m.rank() != 2) throw RankError("qr expects a matrix, got shape " + shape_string(m.shape()));
    auto d = detail::qr_matrix(m.to_matrix());
    return {DenseTensor::from_matrix(d.q), DenseTensor::from_matrix(d.r)};
}

/// m = R Q with Q having orthonormal rows; computed from qr_left of m^dagger,
/// so R is lower triangular.
inline std::pair<DenseTensor, DenseTensor> qr_right(const DenseTensor& m) {
    if (m.rank() != 2) throw RankError("qr expects a matrix, got shape " + shape_string(m.shape()));
    auto d = detail::qr_matrix(m.to_matrix().adjoint());
    return {DenseTensor::from_matrix(d.r.adjoint()), DenseTensor::from_matrix(d.q.adjoint())};
}

struct TruncatedSvd {
    SvdTriple svd;
    double discarded_weight = 0.0;
};

/// Keeps min(rank, max_kept, #values with ratio >= rel_cutoff) leading
/// values (never fewer than one). The discarded weight is the sum of squares
/// of the dropped values before any rescaling.
inline TruncatedSvd truncate(const SvdTriple& t, const TruncationPolicy& policy,
                             Renormalize renormalize = Renormalize::yes) {
    const auto plan = plan_truncation(t.singular_values, policy);
    const auto k = static_cast<Eigen::Index>(plan.kept);
    const auto rows = static_cast<Eigen::Index>(t.left_isometry.extent(0));
    const auto cols = static_cast<Eigen::Index>(t.right_isometry_conjugate.extent(1));
    const auto full = static_cast<Eigen::Index>(t.rank());

    TruncatedSvd out;
    out.discarded_weight = plan.discarded_weight;
    out.svd.singular_values.assign(t.singular_values.begin(), t.singular_values.begin() + plan.kept);
    if (renormalize == Renormalize::yes && plan.kept_weight > 0.0) {
        const double scale = 1.0 / std::sqrt(plan.kept_weight);
        for (double& s : out.svd.singular_values) s *= scale;
    }
    out.svd.left_isometry = DenseTensor::from_matrix(t.left_isometry.as_matrix(rows, full).leftCols(k));
    out.svd.right_isometry_conjugate =
        DenseTensor::from_matrix(t.right_isometry_conjugate.as_matrix(full, cols).topRows(k));
    return out;
}

/// Reassembles U diag(S) V^dagger.
inline DenseTensor reconstruct(const SvdTriple& t) {
    const auto rows = static_cast<Eigen::Index>(t.left_isometry.extent(0));
    const auto cols = static_cast<Eigen::Index>(t.right_isometry_conjugate.extent(1));
    const auto k = static_cast<Eigen::Index>(t.rank());
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(t.singular_values.data(), k);
    Eigen::MatrixXcd m = t.left_isometry.as_matrix(rows, k) * s.cast<cplx>().asDiagonal() *
                         t.right_isometry_conjugate.as_matrix(k, cols);
    return DenseTensor::from_matrix(m);
}

} // namespace mpsim
