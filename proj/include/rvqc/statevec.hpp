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
 * Ideal statevector simulation.
 *
 * Basis index convention: qubit 0 is the most significant bit, so on two
 * qubits index 2 = |10> means qubit 0 is set.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"
#include "gate.hpp"
#include "kernels.hpp"

namespace rvqc {

inline constexpr std::size_t kMaxStateQubits = 20;

class StateVector {
  public:
    StateVector() = default;

    explicit StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
        const std::size_t d = amps_.size();
        if (d < 2 || (d & (d - 1)) != 0) {
            throw UsageError("StateVector: length must be a power of two >= 2");
        }
        while ((std::size_t{1} << n_qubits_) < d) {
            ++n_qubits_;
        }
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] const std::vector<Complex> &amplitudes() const { return amps_; }
    [[nodiscard]] std::span<Complex> data() { return amps_; }
    [[nodiscard]] std::span<const Complex> data() const { return amps_; }
    const Complex &operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

    [[nodiscard]] std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            p[i] = std::norm(amps_[i]);
        }
        return p;
    }

    /// In-place gate application; see apply_gate() for the value form.
    void apply(const Gate &g) {
        for (std::size_t i = 0; i < g.arity(); ++i) {
            if (g.qubits[i] >= n_qubits_) {
                throw UsageError("apply_gate: qubit " + std::to_string(g.qubits[i]) +
                                 " out of range for " + std::to_string(n_qubits_) +
                                 "-qubit state");
            }
        }
        if (g.arity() == 2 && g.qubits[0] == g.qubits[1]) {
            throw UsageError("apply_gate: 2-qubit gate on repeated qubit");
        }
        kernels::apply_gate(amps_, n_qubits_, 0, g);
    }

    void apply(const Circuit &c) {
        if (c.n_qubits() != n_qubits_) {
            throw UsageError("run_circuit: circuit has " + std::to_string(c.n_qubits()) +
                             " qubits, state has " + std::to_string(n_qubits_));
        }
        for (const auto &g : c) {
            kernels::apply_gate(amps_, n_qubits_, 0, g);
        }
    }

  private:
    std::size_t n_qubits_{0};
    std::vector<Complex> amps_;
};

inline StateVector zero_state(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxStateQubits) {
        throw ConfigError("zero_state: n_qubits must be in [1, " +
                          std::to_string(kMaxStateQubits) + "], got " +
                          std::to_string(n_qubits));
    }
    std::vector<Complex> amps(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps[0] = 1.0;
    return StateVector(std::move(amps));
}

inline StateVector basis_state(std::size_t n_qubits, std::size_t index) {
    auto s = zero_state(n_qubits);
    if (index >= s.dim()) {
        throw UsageError("basis_state: index out of range");
    }
    std::vector<Complex> amps(s.dim(), Complex{0.0, 0.0});
    amps[index] = 1.0;
    return StateVector(std::move(amps));
}

inline StateVector apply_gate(StateVector state, const Gate &g) {
    state.apply(g);
    return state;
}

inline StateVector run_circuit(StateVector state, const Circuit &c) {
    state.apply(c);
    return state;
}

inline double prob_all_zero(const StateVector &state) {
    const double p = std::norm(state[0]);
    return p > 1.0 ? 1.0 : p;
}

/**
 * Multinomial sample of `n_shots` outcomes. Drawn as a chain of conditional
 * binomials, so the counts are an exact multinomial draw in O(d) RNG calls.
 * Only outcomes with a nonzero count appear in the map.
 */
inline std::map<std::size_t, std::size_t> sample_counts(std::span<const double> probabilities,
                                                        std::size_t n_shots, Rng &rng) {
    if (n_shots == 0) {
        throw UsageError("sample_counts: n_shots must be positive");
    }
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw UsageError("sample_counts: probabilities must be finite and nonnegative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw UsageError("sample_counts: probabilities sum to " + std::to_string(total));
    }
    std::map<std::size_t, std::size_t> counts;
    std::size_t remaining = n_shots;
    double remaining_mass = total;
    for (std::size_t i = 0; i < probabilities.size() && remaining > 0; ++i) {
        const double p = probabilities[i];
        if (p <= 0.0) {
            continue;
        }
        std::size_t c = remaining;
        const double q = p / remaining_mass;
        if (q < 1.0) {
            std::binomial_distribution<std::size_t> dist(remaining, q);
            c = dist(rng.engine());
        }
        if (c > 0) {
            counts[i] = c;
        }
        remaining -= c;
        remaining_mass -= p;
        if (remaining_mass <= 0.0) {
            break;
        }
    }
    if (remaining > 0) {
        // round-off left mass unassigned; give it to the last supported outcome
        for (std::size_t i = probabilities.size(); i-- > 0;) {
            if (probabilities[i] > 0.0) {
                counts[i] += remaining;
                break;
            }
        }
    }
    return counts;
}

} // namespace rvqc
