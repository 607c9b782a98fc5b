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
 * Dense unitary of a circuit, for small registers.
 */
#pragma once

#include <string>

#include <Eigen/Dense>

#include "circuit.hpp"
#include "statevec.hpp"

namespace rvqc {

using Matrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxUnitaryQubits = 10;

/// Column j is the circuit applied to basis state |j>.
inline Matrix unitary_matrix(const Circuit &c) {
    if (c.n_qubits() > kMaxUnitaryQubits) {
        throw ConfigError("unitary_matrix: at most " + std::to_string(kMaxUnitaryQubits) +
                          " qubits supported, got " + std::to_string(c.n_qubits()));
    }
    const std::size_t d = std::size_t{1} << c.n_qubits();
    Matrix u(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
        const auto col = run_circuit(basis_state(c.n_qubits(), j), c);
        for (std::size_t i = 0; i < d; ++i) {
            u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
        }
    }
    return u;
}

} // namespace rvqc
