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
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mpsim/errors.hpp"
#include "mpsim/tensor.hpp"

namespace mpsim {

inline constexpr double kUnitarityTolerance = 1e-8;

/// Largest entry of |U^dagger U - I|.
inline double unitarity_deviation(const Eigen::MatrixXcd& u) {
    if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

/// A one- or two-qubit unitary. For two qubits the matrix acts on the basis
/// |q0 q1> with qubits[0] as the more significant bit.
struct Gate {
    std::string label;
    std::vector<std::size_t> qubits;
    Eigen::MatrixXcd matrix;

    std::size_t arity() const noexcept { return qubits.size(); }

    /// Throws ValidationError unless the gate is well formed for num_qubits.
    void validate(std::size_t num_qubits) const {
        if (arity() != 1 && arity() != 2) {
            throw ValidationError("gate '" + label + "' must act on one or two qubits");
        }
        const auto dim = Eigen::Index{1} << arity();
        if (matrix.rows() != dim || matrix.cols() != dim) {
            throw ValidationError("gate '" + label + "' matrix has wrong size");
        }
        for (std::size_t q : qubits) {
            if (q >= num_qubits) {
                throw ValidationError("gate '" + label + "' targets qubit " + std::to_string(q) + " of " +
                                      std::to_string(num_qubits));
            }
        }
        if (arity() == 2 && qubits[0] == qubits[1]) {
            throw ValidationError("gate '" + label + "' targets the same qubit twice");
        }
        const double dev = unitarity_deviation(matrix);
        if (!(dev <= kUnitarityTolerance)) {
            throw ValidationError("gate '" + label + "' is not unitary (deviation " + std::to_string(dev) + ")");
        }
    }
};

namespace gates {

using std::numbers::pi;
inline const cplx I{0.0, 1.0};

inline Eigen::MatrixXcd m2(cplx a, cplx b, cplx c, cplx d) {
    Eigen::MatrixXcd m(2, 2);
    m << a, b, c, d;
    return m;
}

inline Eigen::MatrixXcd identity2() { return Eigen::MatrixXcd::Identity(2, 2); }
inline Eigen::MatrixXcd x() { return m2(0, 1, 1, 0); }
inline Eigen::MatrixXcd y() { return m2(0, -I, I, 0); }
inline Eigen::MatrixXcd z() { return m2(1, 0, 0, -1); }
inline Eigen::MatrixXcd h() {
    const double r = 1.0 / std::numbers::sqrt2;
    return m2(r, r, r, -r);
}
inline Eigen::MatrixXcd phase(double lambda) { return m2(1, 0, 0, std::polar(1.0, lambda)); }
inline Eigen::MatrixXcd s() { return phase(pi / 2); }
inline Eigen::MatrixXcd sdg() { return phase(-pi / 2); }
inline Eigen::MatrixXcd t() { return phase(pi / 4); }
inline Eigen::MatrixXcd tdg() { return phase(-pi / 4); }
inline Eigen::MatrixXcd sx() { return m2(cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5)); }

inline Eigen::MatrixXcd u3(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    return m2(c, -std::polar(s, lambda), std::polar(s, phi), std::polar(c, phi + lambda));
}
inline Eigen::MatrixXcd u2(double phi, double lambda) { return u3(pi / 2, phi, lambda); }
inline Eigen::MatrixXcd rx(double theta) {
    return m2(std::cos(theta / 2), -I * std::sin(theta / 2), -I * std::sin(theta / 2), std::cos(theta / 2));
}
inline Eigen::MatrixXcd ry(double theta) {
    return m2(std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2));
}
inline Eigen::MatrixXcd rz(double theta) { return m2(std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2)); }

/// |0><0| (x) I + |1><1| (x) u, control on the more significant qubit.
inline Eigen::MatrixXcd controlled(const Eigen::MatrixXcd& u) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
    m.bottomRightCorner(2, 2) = u;
    return m;
}
inline Eigen::MatrixXcd cx() { return controlled(x()); }
inline Eigen::MatrixXcd cy() { return controlled(y()); }
inline Eigen::MatrixXcd cz() { return controlled(z()); }
inline Eigen::MatrixXcd ch() { return controlled(h()); }
inline Eigen::MatrixXcd cphase(double lambda) { return controlled(phase(lambda)); }
inline Eigen::MatrixXcd crz(double theta) { return controlled(rz(theta)); }
inline Eigen::MatrixXcd cu3(double theta, double phi, double lambda) { return controlled(u3(theta, phi, lambda)); }
inline Eigen::MatrixXcd swap() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
    return m;
}
inline Eigen::MatrixXcd rzz(double theta) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = m(3, 3) = std::polar(1.0, -theta / 2);
    m(1, 1) = m(2, 2) = std::polar(1.0, theta / 2);
    return m;
}

} // namespace gates

/// Re-expresses a two-qubit gate so that qubits[0] < qubits[1].
inline Gate ascending(const Gate& g) {
    if (g.arity() != 2 || g.qubits[0] < g.qubits[1]) return g;
    const Eigen::MatrixXcd sw = gates::swap();
    return Gate{g.label, {g.qubits[1], g.qubits[0]}, sw * g.matrix * sw};
}

inline Gate make_gate(std::string label, std::vector<std::size_t> qubits, Eigen::MatrixXcd matrix) {
    return Gate{std::move(label), std::move(qubits), std::move(matrix)};
}

} // namespace mpsim
