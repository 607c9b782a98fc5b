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
 * Matrix-free gate kernels over a flat amplitude array of 2^n_bits entries.
 *
 * Bit positions are counted from the least significant end of the flat
 * index. Callers translate qubit labels into bit positions.
 */
#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "common.hpp"
#include "gate.hpp"

namespace rvqc::kernels {

/// Apply a row-major 2x2 matrix to the amplitude pairs differing in `bit`.
inline void apply_1q(std::span<Complex> data, std::size_t bit, const Mat2 &m) {
    const std::size_t stride = std::size_t{1} << bit;
    const std::size_t dim = data.size();
    for (std::size_t i = 0; i < dim; i += 2 * stride) {
        for (std::size_t j = i; j < i + stride; ++j) {
            const Complex a0 = data[j];
            const Complex a1 = data[j + stride];
            data[j] = m[0] * a0 + m[1] * a1;
            data[j + stride] = m[2] * a0 + m[3] * a1;
        }
    }
}

namespace detail {

/// k-th index with both bits `lo` < `hi` cleared.
inline std::size_t insert_zero_bits(std::size_t k, std::size_t lo, std::size_t hi) {
    const std::size_t lo_mask = (std::size_t{1} << lo) - 1;
    k = ((k & ~lo_mask) << 1U) | (k & lo_mask);
    const std::size_t hi_mask = (std::size_t{1} << hi) - 1;
    return ((k & ~hi_mask) << 1U) | (k & hi_mask);
}

template <class F>
inline void for_each_quad(std::size_t dim, std::size_t bit0, std::size_t bit1, F &&f) {
    const std::size_t lo = bit0 < bit1 ? bit0 : bit1;
    const std::size_t hi = bit0 < bit1 ? bit1 : bit0;
    const std::size_t m0 = std::size_t{1} << bit0;
    const std::size_t m1 = std::size_t{1} << bit1;
    for (std::size_t k = 0; k < dim / 4; ++k) {
        const std::size_t i00 = insert_zero_bits(k, lo, hi);
        f(i00, i00 | m1, i00 | m0, i00 | m0 | m1);
    }
}

} // namespace detail

/**
 * Apply a row-major 4x4 matrix whose local index is 2*bit(bit0) + bit(bit1).
 */
inline void apply_2q(std::span<Complex> data, std::size_t bit0, std::size_t bit1,
                     const Mat4 &m) {
    detail::for_each_quad(data.size(), bit0, bit1,
                          [&](std::size_t i0, std::size_t i1, std::size_t i2, std::size_t i3) {
                              const Complex a[4] = {data[i0], data[i1], data[i2], data[i3]};
                              const std::size_t idx[4] = {i0, i1, i2, i3};
                              for (std::size_t r = 0; r < 4; ++r) {
                                  data[idx[r]] = m[4 * r] * a[0] + m[4 * r + 1] * a[1] +
                                                 m[4 * r + 2] * a[2] + m[4 * r + 3] * a[3];
                              }
                          });
}

inline void apply_cnot(std::span<Complex> data, std::size_t ctrl_bit, std::size_t tgt_bit) {
    detail::for_each_quad(data.size(), ctrl_bit, tgt_bit,
                          [&](std::size_t, std::size_t, std::size_t i10, std::size_t i11) {
                              std::swap(data[i10], data[i11]);
                          });
}

inline void apply_swap(std::span<Complex> data, std::size_t bit0, std::size_t bit1) {
    detail::for_each_quad(data.size(), bit0, bit1,
                          [&](std::size_t, std::size_t i01, std::size_t i10, std::size_t) {
                              std::swap(data[i01], data[i10]);
                          });
}

inline Mat2 conj(const Mat2 &m) {
    return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])};
}

/**
 * Apply `g` where qubit q lives at bit `offset + n_qubits - 1 - q`. With
 * `conjugate` the complex conjugate of the gate matrix is used.
 */
inline void apply_gate(std::span<Complex> data, std::size_t n_qubits, std::size_t offset,
                       const Gate &g, bool conjugate = false) {
    auto bit = [&](std::size_t q) { return offset + n_qubits - 1 - q; };
    switch (g.kind) {
    case GateKind::CNOT:
        apply_cnot(data, bit(g.qubits[0]), bit(g.qubits[1]));
        return;
    case GateKind::SWAP:
        apply_swap(data, bit(g.qubits[0]), bit(g.qubits[1]));
        return;
    default: {
        const Mat2 m = matrix_1q(g);
        apply_1q(data, bit(g.qubits[0]), conjugate ? conj(m) : m);
    }
    }
}

} // namespace rvqc::kernels
