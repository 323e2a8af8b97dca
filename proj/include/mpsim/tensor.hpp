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
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mpsim/errors.hpp"

namespace mpsim {

using cplx = std::complex<double>;
using Shape = std::vector<std::size_t>;

/// Row-major complex matrix; the natural view of a DenseTensor buffer.
using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMatrix>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

inline std::size_t shape_volume(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

inline std::string shape_string(const Shape& shape) {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + ")";
}

/// Dense rank-k complex tensor, row-major (last axis fastest).
class DenseTensor {
public:
    DenseTensor() : data_(1, cplx{0.0}) {}

    explicit DenseTensor(Shape shape)
        : shape_(std::move(shape)), data_(shape_volume(shape_), cplx{0.0}) {}

    DenseTensor(Shape shape, std::vector<cplx> data) : shape_(std::move(shape)), data_(std::move(data)) {
        if (data_.size() != shape_volume(shape_)) {
            throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                                 " does not match shape " + shape_string(shape_));
        }
    }

    static DenseTensor from_matrix(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
        DenseTensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
        t.as_matrix(m.rows(), m.cols()) = m;
        return t;
    }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    template <class... Idx>
    cplx& operator()(Idx... idx) { return data_[offset({static_cast<std::size_t>(idx)...})]; }
    template <class... Idx>
    const cplx& operator()(Idx... idx) const { return data_[offset({static_cast<std::size_t>(idx)...})]; }

    std::size_t offset(std::initializer_list<std::size_t> idx) const {
        std::size_t off = 0;
        std::size_t axis = 0;
        for (std::size_t i : idx) off = off * shape_[axis++] + i;
        return off;
    }

    /// Views the buffer as a rows x cols row-major matrix; rows*cols must equal size().
    RowMap as_matrix(Eigen::Index rows, Eigen::Index cols) {
        check_view(rows, cols);
        return RowMap(data_.data(), rows, cols);
    }
    ConstRowMap as_matrix(Eigen::Index rows, Eigen::Index cols) const {
        check_view(rows, cols);
        return ConstRowMap(data_.data(), rows, cols);
    }

    /// Copies a rank-2 tensor into a column-major Eigen matrix.
    Eigen::MatrixXcd to_matrix() const {
        if (rank() != 2) throw RankError("expected a matrix, got shape " + shape_string(shape_));
        return as_matrix(static_cast<Eigen::Index>(shape_[0]), static_cast<Eigen::Index>(shape_[1]));
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(),
                           [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const auto& z : data_) acc += std::norm(z);
        return std::sqrt(acc);
    }

    DenseTensor conj() const {
        DenseTensor out = *this;
        for (auto& z : out.data_) z = std::conj(z);
        return out;
    }

    DenseTensor scaled(cplx alpha) const {
        DenseTensor out = *this;
        for (auto& z : out.data_) z *= alpha;
        return out;
    }

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    void check_view(Eigen::Index rows, Eigen::Index cols) const {
        if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data_.size()) {
            throw DimensionError("cannot view shape " + shape_string(shape_) + " as " +
                                 std::to_string(rows) + "x" + std::to_string(cols));
        }
    }

    Shape shape_;
    std::vector<cplx> data_;
};

/// Reorders axes: result axis k is input axis perm[k].
inline DenseTensor permute(const DenseTensor& t, std::span<const std::size_t> perm) {
    const std::size_t r = t.rank();
    if (perm.size() != r) throw DimensionError("permutation length does not match tensor rank");
    std::vector<bool> seen(r, false);
    for (std::size_t p : perm) {
        if (p >= r || seen[p]) throw DimensionError("invalid axis permutation");
        seen[p] = true;
    }
    if (std::is_sorted(perm.begin(), perm.end())) return t;

    Shape out_shape(r);
    std::vector<std::size_t> in_strides(r, 1);
    for (std::size_t k = r; k-- > 1;) in_strides[k - 1] = in_strides[k] * t.extent(k);
    std::vector<std::size_t> strides(r);
    for (std::size_t k = 0; k < r; ++k) {
        out_shape[k] = t.extent(perm[k]);
        strides[k] = in_strides[perm[k]];
    }

    DenseTensor out(out_shape);
    auto src = t.data();
    auto dst = out.data();
    std::vector<std::size_t> idx(r, 0);
    std::size_t in_off = 0;
    for (std::size_t o = 0; o < dst.size(); ++o) {
        dst[o] = src[in_off];
        for (std::size_t k = r; k-- > 0;) {
            if (++idx[k] < out_shape[k]) {
                in_off += strides[k];
                break;
            }
            in_off -= strides[k] * (out_shape[k] - 1);
            idx[k] = 0;
        }
    }
    return out;
}

inline DenseTensor permute(const DenseTensor& t, std::initializer_list<std::size_t> perm) {
    return permute(t, std::span<const std::size_t>(perm.begin(), perm.size()));
}

/// Reinterprets the row-major buffer with a new shape of the same volume.
inline DenseTensor reshape(const DenseTensor& t, Shape shape) {
    if (shape_volume(shape) != t.size()) {
        throw DimensionError("cannot reshape " + shape_string(t.shape()) + " to " + shape_string(shape));
    }
    return DenseTensor(std::move(shape), std::vector<cplx>(t.data().begin(), t.data().end()));
}

using AxisGroups = std::vector<std::vector<std::size_t>>;

/// Fuses each group of axes into one axis. Groups must partition all axes;
/// within the result, group g has extent equal to the product of its members.
inline DenseTensor reshape_merge(const DenseTensor& t, const AxisGroups& groups) {
    std::vector<std::size_t> perm;
    Shape merged;
    for (const auto& g : groups) {
        if (g.empty()) throw DimensionError("empty axis group");
        std::size_t extent = 1;
        for (std::size_t axis : g) {
            if (axis >= t.rank()) throw DimensionError("axis group refers to axis out of range");
            extent *= t.extent(axis);
            perm.push_back(axis);
        }
        merged.push_back(extent);
    }
    if (perm.size() != t.rank()) throw DimensionError("axis groups do not partition all axes");
    return reshape(permute(t, perm), std::move(merged));
}

/// Inverse of reshape_merge: restores the original shape and axis order.
inline DenseTensor reshape_unmerge(const DenseTensor& merged, const AxisGroups& groups,
                                   const Shape& original_shape) {
    std::vector<std::size_t> perm;
    Shape grouped_shape;
    for (const auto& g : groups) {
        for (std::size_t axis : g) {
            perm.push_back(axis);
            grouped_shape.push_back(original_shape.at(axis));
        }
    }
    if (perm.size() != original_shape.size()) throw DimensionError("axis groups do not partition all axes");
    std::vector<std::size_t> inverse(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) inverse[perm[k]] = k;
    return permute(reshape(merged, std::move(grouped_shape)), inverse);
}

using AxisPairs = std::vector<std::pair<std::size_t, std::size_t>>;

/// Sums over each (axis of a, axis of b) pair. The result carries the
/// unpaired axes of a followed by the unpaired axes of b, in original order.
inline DenseTensor contract(const DenseTensor& a, const DenseTensor& b, const AxisPairs& axis_pairs) {
    std::vector<bool> paired_a(a.rank(), false);
    std::vector<bool> paired_b(b.rank(), false);
    std::vector<std::size_t> perm_a;
    std::vector<std::size_t> perm_b;
    std::size_t inner = 1;
    for (auto [ia, ib] : axis_pairs) {
        if (ia >= a.rank() || ib >= b.rank()) throw DimensionError("contracted axis out of range");
        if (paired_a[ia] || paired_b[ib]) throw DimensionError("axis contracted twice");
        if (a.extent(ia) != b.extent(ib)) {
            throw DimensionError("extent mismatch on contracted axes: " + std::to_string(a.extent(ia)) +
                                 " vs " + std::to_string(b.extent(ib)));
        }
        paired_a[ia] = paired_b[ib] = true;
        inner *= a.extent(ia);
    }

    Shape out_shape;
    std::size_t rows = 1;
    std::size_t cols = 1;
    for (std::size_t k = 0; k < a.rank(); ++k) {
        if (!paired_a[k]) {
            perm_a.push_back(k);
            out_shape.push_back(a.extent(k));
            rows *= a.extent(k);
        }
    }
    for (auto [ia, ib] : axis_pairs) {
        perm_a.push_back(ia);
        perm_b.push_back(ib);
    }
    for (std::size_t k = 0; k < b.rank(); ++k) {
        if (!paired_b[k]) {
            perm_b.push_back(k);
            out_shape.push_back(b.extent(k));
            cols *= b.extent(k);
        }
    }

    const DenseTensor pa = permute(a, perm_a);
    const DenseTensor pb = permute(b, perm_b);
    const auto ri = static_cast<Eigen::Index>(rows);
    const auto ci = static_cast<Eigen::Index>(cols);
    const auto ki = static_cast<Eigen::Index>(inner);
    DenseTensor out(out_shape);
    out.as_matrix(ri, ci).noalias() = pa.as_matrix(ri, ki) * pb.as_matrix(ki, ci);
    return out;
}

} // namespace mpsim
