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
 * Parameter-shift gradients and the Adam optimizer.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"

namespace rvqc {

/// Shift for Pauli rotations R(t) = exp(-i t P / 2): generator eigenvalues +-1/2.
inline constexpr double kParameterShift = kPi / 2;

/**
 * Gradient by the parameter-shift rule,
 *   g_i = [C(t + (pi/2) e_i) - C(t - (pi/2) e_i)] / 2,
 * exact for costs built from Pauli rotations evaluated exactly.
 *
 * `cost` is called either as cost(params) or, when it accepts them, as
 * cost(params, i, sign) with sign = +1 / -1, so that shot-based costs can
 * draw from a per-(parameter, sign) random substream.
 */
template <class CostFn>
std::vector<double> parameter_shift_gradient(CostFn &&cost, const ParamVector &params) {
    std::vector<double> grad(params.size(), 0.0);
    ParamVector shifted = params;
    auto eval = [&](std::size_t i, int sign) -> double {
        if constexpr (std::is_invocable_v<CostFn &, const ParamVector &, std::size_t, int>) {
            return cost(shifted, i, sign);
        } else {
            return cost(shifted);
        }
    };
    for (std::size_t i = 0; i < params.size(); ++i) {
        shifted[i] = params[i] + kParameterShift;
        const double plus = eval(i, +1);
        shifted[i] = params[i] - kParameterShift;
        const double minus = eval(i, -1);
        shifted[i] = params[i];
        grad[i] = (plus - minus) / 2.0;
    }
    return grad;
}

struct AdamState {
    std::size_t step_count{0};
    std::vector<double> m;
    std::vector<double> v;
    double learning_rate{0.1};
    double beta1{0.9};
    double beta2{0.999};
    double eps{1e-8};
};

inline AdamState adam_init(std::size_t param_count, double learning_rate, double beta1 = 0.9,
                           double beta2 = 0.999, double eps = 1e-8) {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("adam_init: learning rate must be positive");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(eps > 0.0)) {
        throw ConfigError("adam_init: betas must lie in [0, 1) and eps must be positive");
    }
    return AdamState{0,
                     std::vector<double>(param_count, 0.0),
                     std::vector<double>(param_count, 0.0),
                     learning_rate,
                     beta1,
                     beta2,
                     eps};
}

/// One bias-corrected Adam update of `params` in place.
inline void adam_step(AdamState &state, ParamVector &params, std::span<const double> grad) {
    if (grad.size() != params.size() || state.m.size() != params.size()) {
        throw UsageError("adam_step: length mismatch");
    }
    for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!std::isfinite(grad[i])) {
            throw NumericalError("adam_step: non-finite gradient component " + std::to_string(i));
        }
    }
    state.step_count += 1;
    const auto t = static_cast<double>(state.step_count);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const double g = grad[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

} // namespace rvqc
