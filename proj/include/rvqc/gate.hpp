// Copyright 2026 The RVQC Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Gate kinds, gate records and their 2x2 / 4x4 unitaries.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "common.hpp"

namespace rvqc {

enum class GateKind { H, X, Y, Z, Rx, Ry, Rz, CNOT, SWAP };

inline constexpr std::array<GateKind, 9> kAllGateKinds{
    GateKind::H,  GateKind::X,  GateKind::Y,    GateKind::Z,   GateKind::Rx,
    GateKind::Ry, GateKind::Rz, GateKind::CNOT, GateKind::SWAP};

inline constexpr std::size_t arity(GateKind k) {
    return (k == GateKind::CNOT || k == GateKind::SWAP) ? 2 : 1;
}

inline constexpr bool is_rotation(GateKind k) {
    return k == GateKind::Rx || k == GateKind::Ry || k == GateKind::Rz;
}

inline constexpr std::string_view kind_name(GateKind k) {
    switch (k) {
    case GateKind::H:
        return "H";
    case GateKind::X:
        return "X";
    case GateKind::Y:
        return "Y";
    case GateKind::Z:
        return "Z";
    case GateKind::Rx:
        return "RX";
    case GateKind::Ry:
        return "RY";
    case GateKind::Rz:
        return "RZ";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::SWAP:
        return "SWAP";
    }
    return "?";
}

inline std::optional<GateKind> kind_from_name(std::string_view s) {
    for (auto k : kAllGateKinds) {
        if (kind_name(k) == s) {
            return k;
        }
    }
    return std::nullopt;
}

/**
 * One gate. For 2-qubit kinds `qubits[0]` is the control (CNOT) and
 * `qubits[1]` the target. `angle` is meaningful only for rotations and
 * `param_id` links a trainable rotation to its parameter slot.
 */
struct Gate {
    GateKind kind{GateKind::H};
    std::array<std::size_t, 2> qubits{0, 0};
    double angle{0.0};
    std::optional<std::size_t> param_id{};

    [[nodiscard]] std::size_t arity() const { return rvqc::arity(kind); }

    static Gate single(GateKind k, std::size_t q) { return Gate{k, {q, q}, 0.0, {}}; }
    static Gate rotation(GateKind k, std::size_t q, double theta,
                         std::optional<std::size_t> pid = {}) {
        return Gate{k, {q, q}, theta, pid};
    }
    static Gate two(GateKind k, std::size_t q0, std::size_t q1) {
        return Gate{k, {q0, q1}, 0.0, {}};
    }

    static Gate h(std::size_t q) { return single(GateKind::H, q); }
    static Gate x(std::size_t q) { return single(GateKind::X, q); }
    static Gate y(std::size_t q) { return single(GateKind::Y, q); }
    static Gate z(std::size_t q) { return single(GateKind::Z, q); }
    static Gate rx(std::size_t q, double t) { return rotation(GateKind::Rx, q, t); }
    static Gate ry(std::size_t q, double t) { return rotation(GateKind::Ry, q, t); }
    static Gate rz(std::size_t q, double t) { return rotation(GateKind::Rz, q, t); }
    static Gate cnot(std::size_t c, std::size_t t) { return two(GateKind::CNOT, c, t); }
    static Gate swap(std::size_t a, std::size_t b) { return two(GateKind::SWAP, a, b); }

    bool operator==(const Gate &o) const {
        if (kind != o.kind || param_id != o.param_id) {
            return false;
        }
        if (qubits[0] != o.qubits[0]) {
            return false;
        }
        if (arity() == 2 && qubits[1] != o.qubits[1]) {
            return false;
        }
        return !is_rotation(kind) || angle == o.angle;
    }
};

/// The adjoint gate. Every fixed gate in the set is self-adjoint.
inline Gate adjoint(const Gate &g) {
    Gate out = g;
    if (is_rotation(g.kind)) {
        out.angle = -g.angle;
    }
    return out;
}

using Mat2 = std::array<Complex, 4>;  // row-major
using Mat4 = std::array<Complex, 16>; // row-major, index = 2*bit(q0) + bit(q1)

inline Mat2 matrix_1q(const Gate &g) {
    const double s2 = 1.0 / std::sqrt(2.0);
    const Complex i{0.0, 1.0};
    const double c = std::cos(g.angle / 2);
    const double s = std::sin(g.angle / 2);
    switch (g.kind) {
    case GateKind::H:
        return {s2, s2, s2, -s2};
    case GateKind::X:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y:
        return {0.0, -i, i, 0.0};
    case GateKind::Z:
        return {1.0, 0.0, 0.0, -1.0};
    case GateKind::Rx:
        return {c, -i * s, -i * s, c};
    case GateKind::Ry:
        return {c, -s, s, c};
    case GateKind::Rz:
        return {std::polar(1.0, -g.angle / 2), 0.0, 0.0, std::polar(1.0, g.angle / 2)};
    default:
        throw UsageError("matrix_1q: gate " + std::string(kind_name(g.kind)) +
                         " is not a 1-qubit gate");
    }
}

inline Mat4 matrix_2q(const Gate &g) {
    switch (g.kind) {
    case GateKind::CNOT:
        return {1, 0, 0, 0, //
                0, 1, 0, 0, //
                0, 0, 0, 1, //
                0, 0, 1, 0};
    case GateKind::SWAP:
        return {1, 0, 0, 0, //
                0, 0, 1, 0, //
                0, 1, 0, 0, //
                0, 0, 0, 1};
    default:
        throw UsageError("matrix_2q: gate " + std::string(kind_name(g.kind)) +
                         " is not a 2-qubit gate");
    }
}

} // namespace rvqc
