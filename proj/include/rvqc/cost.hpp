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
 * Loschmidt-echo cost circuits and cost evaluation.
 *
 * The step-k cost is 1 - |<0| V^dag(prev) U_k^dag V(params) |0>|^2, realized
 * as the gate list V(params), inverse(U_k), inverse(V(prev)) and read out as
 * one minus the all-zero probability.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "circuit.hpp"
#include "common.hpp"
#include "density.hpp"
#include "statevec.hpp"
#include "unitary.hpp"

namespace rvqc {

enum class Backend { ExactIdeal, SampledIdeal, SampledNoisy };

inline std::string backend_name(Backend b) {
    switch (b) {
    case Backend::ExactIdeal:
        return "exact-ideal";
    case Backend::SampledIdeal:
        return "sampled-ideal";
    case Backend::SampledNoisy:
        return "sampled-noisy";
    }
    return "?";
}

inline std::optional<Backend> backend_from_name(const std::string &s) {
    for (auto b : {Backend::ExactIdeal, Backend::SampledIdeal, Backend::SampledNoisy}) {
        if (backend_name(b) == s) {
            return b;
        }
    }
    return std::nullopt;
}

/**
 * Everything fixed during one RVQC step: the ansatz shape, the part U_k,
 * the frozen previous parameters (absent at k = 1, meaning V(theta^(0)) = I)
 * and how the cost is measured.
 *
 * `on_execute`, when set, sees every cost circuit before it is simulated.
 */
class CostContext {
  public:
    using Observer = std::function<void(const Circuit &)>;

    CostContext(AnsatzSpec spec, Circuit target_part, std::optional<ParamVector> prev_params = {},
                Backend backend = Backend::ExactIdeal, std::size_t n_shots = 1024,
                NoiseModel noise = {})
        : spec_{spec}, target_{std::move(target_part)}, prev_{std::move(prev_params)},
          backend_{backend}, n_shots_{n_shots}, noise_{noise} {
        if (target_.n_qubits() != spec_.n_qubits) {
            throw UsageError("CostContext: target has " + std::to_string(target_.n_qubits()) +
                             " qubits, ansatz has " + std::to_string(spec_.n_qubits));
        }
        if (prev_ && prev_->size() != spec_.param_count()) {
            throw UsageError("CostContext: previous parameters have wrong length");
        }
        if (backend_ != Backend::ExactIdeal && n_shots_ == 0) {
            throw UsageError("CostContext: sampled backends need n_shots >= 1");
        }
        noise_.validate();
        suffix_ = inverse(target_);
        if (prev_) {
            suffix_ = concat(suffix_, inverse(build_ansatz(spec_, *prev_)));
        }
    }

    [[nodiscard]] const AnsatzSpec &spec() const { return spec_; }
    [[nodiscard]] const Circuit &target_part() const { return target_; }
    [[nodiscard]] const std::optional<ParamVector> &prev_params() const { return prev_; }
    [[nodiscard]] Backend backend() const { return backend_; }
    [[nodiscard]] std::size_t n_shots() const { return n_shots_; }
    [[nodiscard]] const NoiseModel &noise() const { return noise_; }

    /// inverse(U_k) followed by inverse(V(prev)), shared by every evaluation.
    [[nodiscard]] const Circuit &suffix() const { return suffix_; }

    void set_observer(Observer obs) { observer_ = std::move(obs); }
    void notify(const Circuit &c) const {
        if (observer_) {
            observer_(c);
        }
    }

  private:
    AnsatzSpec spec_;
    Circuit target_;
    std::optional<ParamVector> prev_;
    Backend backend_;
    std::size_t n_shots_;
    NoiseModel noise_;
    Circuit suffix_;
    Observer observer_;
};

inline Circuit build_cost_circuit(const CostContext &ctx, const ParamVector &params) {
    Circuit c = concat(build_ansatz(ctx.spec(), params), ctx.suffix());
    c.set_label("cost");
    return c;
}

/// Exact 1 - P(all zero) on the ideal simulator.
inline double cost_exact(const CostContext &ctx, const ParamVector &params) {
    const Circuit c = build_cost_circuit(ctx, params);
    ctx.notify(c);
    const double p0 = prob_all_zero(run_circuit(zero_state(c.n_qubits()), c));
    return std::clamp(1.0 - p0, 0.0, 1.0);
}

/**
 * Shot estimate 1 - (all-zero count)/n_shots. The noisy backend evolves the
 * density matrix, applies readout error to the outcome distribution and
 * samples from that; with a zero noise model it takes the ideal path.
 */
inline double cost_sampled(const CostContext &ctx, const ParamVector &params, Rng &rng) {
    if (ctx.backend() == Backend::ExactIdeal) {
        throw UsageError("cost_sampled: context uses the exact backend");
    }
    const Circuit c = build_cost_circuit(ctx, params);
    ctx.notify(c);
    std::vector<double> probs;
    if (ctx.backend() == Backend::SampledIdeal || ctx.noise().is_noiseless()) {
        probs = run_circuit(zero_state(c.n_qubits()), c).probabilities();
    } else {
        const auto rho = evolve_density(density_from_state(zero_state(c.n_qubits())), c,
                                        ctx.noise());
        probs = measurement_probs(rho, ctx.noise());
    }
    // renormalize away accumulated round-off before sampling
    double total = 0.0;
    for (double p : probs) {
        total += p;
    }
    for (double &p : probs) {
        p /= total;
    }
    const auto counts = sample_counts(probs, ctx.n_shots(), rng);
    const auto it = counts.find(0);
    const std::size_t zeros = it == counts.end() ? 0 : it->second;
    return 1.0 - static_cast<double>(zeros) / static_cast<double>(ctx.n_shots());
}

/// Cost on the context's own backend; `rng` is only used by sampled backends.
inline double cost(const CostContext &ctx, const ParamVector &params, Rng &rng) {
    return ctx.backend() == Backend::ExactIdeal ? cost_exact(ctx, params)
                                                : cost_sampled(ctx, params, rng);
}

/// 1 - |<0| target^dag ansatz |0>|^2 for fixed circuits.
inline double cost_fisc_exact(const Circuit &ansatz, const Circuit &target) {
    const Circuit c = concat(ansatz, inverse(target));
    const double p0 = prob_all_zero(run_circuit(zero_state(c.n_qubits()), c));
    return std::clamp(1.0 - p0, 0.0, 1.0);
}

/// 1 - |Tr(V^dag U)|^2 / d^2, evaluated from explicit matrices.
inline double cost_fumc_exact(const Circuit &ansatz, const Circuit &target) {
    if (ansatz.n_qubits() != target.n_qubits()) {
        throw UsageError("cost_fumc_exact: qubit-count mismatch");
    }
    const Matrix v = unitary_matrix(ansatz);
    const Matrix u = unitary_matrix(target);
    const double d = static_cast<double>(v.rows());
    const Complex tr = (v.adjoint() * u).trace();
    return std::clamp(1.0 - std::norm(tr) / (d * d), 0.0, 1.0);
}

} // namespace rvqc
