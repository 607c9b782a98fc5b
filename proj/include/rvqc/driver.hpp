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
 * VQC and recursive VQC drivers.
 *
 * RVQC splits the target into N contiguous parts and trains a fresh
 * parameter vector per part against the cost
 *   C_k(t) = 1 - |<0| V^dag(t_{k-1}) U_k^dag V(t) |0>|^2,
 * freezing the best-epoch parameters of step k as the reference for step
 * k+1. Plain VQC is the N = 1 case.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"
#include "cost.hpp"
#include "density.hpp"
#include "optim.hpp"
#include "statevec.hpp"

namespace rvqc {

struct CompileConfig {
    Circuit target;
    std::size_t n_parts{1};
    AnsatzSpec ansatz{};
    std::size_t epochs_per_part{100};
    /// Stop a step once the training cost is <= tolerance; 0 trains every epoch.
    double tolerance{0.0};
    double learning_rate{0.1};
    std::size_t n_shots{8192};
    Backend train_backend{Backend::ExactIdeal};
    NoiseModel noise{1e-3, 1e-2, 2e-2};
    std::uint64_t master_seed{0};
    /// Replaces the random initialization of every step when set.
    std::optional<ParamVector> init_override{};

    void validate() const {
        if (target.n_qubits() != ansatz.n_qubits) {
            throw ConfigError("CompileConfig: target and ansatz qubit counts differ");
        }
        if (n_parts == 0) {
            throw ConfigError("CompileConfig: n_parts must be >= 1");
        }
        if (epochs_per_part == 0) {
            throw ConfigError("CompileConfig: epochs_per_part must be >= 1");
        }
        if (!(tolerance >= 0.0 && tolerance <= 1.0)) {
            throw ConfigError("CompileConfig: tolerance must lie in [0, 1]");
        }
        if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
            throw ConfigError("CompileConfig: learning_rate must be positive");
        }
        if (train_backend != Backend::ExactIdeal && n_shots == 0) {
            throw ConfigError("CompileConfig: n_shots must be >= 1");
        }
        noise.validate();
        if (init_override && init_override->size() != ansatz.param_count()) {
            throw ConfigError("CompileConfig: init_override has wrong length");
        }
    }
};

struct EpochLog {
    std::size_t epoch{0};
    double train_cost{0.0};
    double ideal_cost{0.0};
};

struct StepRecord {
    std::size_t step{0}; // 1-based part index k
    std::size_t part_gate_count{0};
    std::vector<EpochLog> epochs;
    std::size_t best_epoch{0};
    ParamVector best_params;
    double fidelity_ideal_ansatz{0.0}; // F[rho_A^I(k), rho_R^I(k)]
    double fidelity_noisy_ansatz{0.0}; // F[rho_A^N(k), rho_R^I(k)]
    double fidelity_noisy_target{0.0}; // F[rho_R^N(k), rho_R^I(k)]
    std::size_t max_cost_circuit_gates{0};
    double wall_seconds{0.0};
};

struct RunRecord {
    std::vector<StepRecord> steps;
    std::size_t ansatz_gate_count{0};
    bool aborted{false};
    std::string abort_reason;

    [[nodiscard]] const StepRecord &final_step() const { return steps.back(); }
};

/// Callbacks for streaming progress out of a run.
struct RunHooks {
    std::function<void(std::size_t step, const EpochLog &)> on_epoch;
};

namespace detail {

inline std::uint64_t sign_id(int sign) { return sign > 0 ? 1 : 2; }

} // namespace detail

/**
 * Recursive VQC. Each step trains for at most `epochs_per_part` epochs; an
 * epoch evaluates the training cost at the current parameters, logs it,
 * stops if it is within tolerance, and otherwise takes one Adam step on the
 * parameter-shift gradient. The parameters of the lowest-cost epoch (earliest
 * on ties) are kept.
 *
 * Random substreams derived from `master_seed`:
 *   {Init, k}                     initial parameters of step k
 *   {Eval, k, epoch}              shots for the logged training cost
 *   {Shots, k, epoch, i, sign}    shots for each parameter-shift evaluation
 *
 * A non-finite cost or gradient ends the run with `aborted` set; completed
 * steps are kept.
 */
inline RunRecord run_rvqc(const CompileConfig &config, const RunHooks &hooks = {}) {
    config.validate();
    const std::uint64_t seed = config.master_seed;
    const std::size_t n = config.target.n_qubits();
    const auto parts = split(config.target, config.n_parts);

    RunRecord record;
    record.ansatz_gate_count = config.ansatz.gate_count();

    StateVector ideal_target = zero_state(n);
    DensityMatrix noisy_target = density_from_state(ideal_target);
    std::optional<ParamVector> prev;

    for (std::size_t k = 1; k <= parts.size(); ++k) {
        const auto t_start = std::chrono::steady_clock::now();
        const Circuit &part = parts[k - 1];
        StepRecord step;
        step.step = k;
        step.part_gate_count = part.size();

        CostContext train_ctx(config.ansatz, part, prev, config.train_backend, config.n_shots,
                              config.noise);
        CostContext ideal_ctx(config.ansatz, part, prev, Backend::ExactIdeal);
        auto track = [&step](const Circuit &c) {
            step.max_cost_circuit_gates = std::max(step.max_cost_circuit_gates, c.size());
        };
        train_ctx.set_observer(track);
        ideal_ctx.set_observer(track);

        ParamVector params = config.init_override ? *config.init_override : [&] {
            Rng rng = Rng::substream(seed, {tag(Stream::Init), k});
            return init_params(config.ansatz, rng);
        }();
        AdamState adam = adam_init(params.size(), config.learning_rate);

        double best_cost = 0.0;
        bool have_best = false;
        try {
            for (std::size_t epoch = 0; epoch < config.epochs_per_part; ++epoch) {
                Rng eval_rng = Rng::substream(seed, {tag(Stream::Eval), k, epoch});
                const double train = cost(train_ctx, params, eval_rng);
                const double ideal = config.train_backend == Backend::ExactIdeal
                                         ? train
                                         : cost_exact(ideal_ctx, params);
                if (!std::isfinite(train) || !std::isfinite(ideal)) {
                    throw NumericalError("non-finite cost at step " + std::to_string(k) +
                                         ", epoch " + std::to_string(epoch));
                }
                const EpochLog log{epoch, train, ideal};
                step.epochs.push_back(log);
                if (hooks.on_epoch) {
                    hooks.on_epoch(k, log);
                }
                if (!have_best || train < best_cost) {
                    have_best = true;
                    best_cost = train;
                    step.best_epoch = epoch;
                    step.best_params = params;
                }
                if (train <= config.tolerance || epoch + 1 == config.epochs_per_part) {
                    break;
                }
                auto shifted_cost = [&](const ParamVector &p, std::size_t i, int sign) {
                    Rng rng = Rng::substream(
                        seed, {tag(Stream::Shots), k, epoch, i, detail::sign_id(sign)});
                    return cost(train_ctx, p, rng);
                };
                const auto grad = parameter_shift_gradient(shifted_cost, params);
                adam_step(adam, params, grad);
                if (!params.all_finite()) {
                    throw NumericalError("non-finite parameters after epoch " +
                                         std::to_string(epoch) + " of step " + std::to_string(k));
                }
            }
        } catch (const NumericalError &e) {
            record.aborted = true;
            record.abort_reason = e.what();
            return record;
        }

        ideal_target.apply(part);
        noisy_target = evolve_density(std::move(noisy_target), part, config.noise);

        const Circuit ansatz = build_ansatz(config.ansatz, step.best_params);
        const StateVector ansatz_state = run_circuit(zero_state(n), ansatz);
        step.fidelity_ideal_ansatz = fidelity_pure(ideal_target, density_from_state(ansatz_state));
        step.fidelity_noisy_ansatz = fidelity_pure(
            ideal_target,
            evolve_density(density_from_state(zero_state(n)), ansatz, config.noise));
        step.fidelity_noisy_target = fidelity_pure(ideal_target, noisy_target);

        prev = step.best_params;
        step.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        record.steps.push_back(std::move(step));
    }
    return record;
}

/// Plain VQC: the whole target in one step.
inline RunRecord run_vqc(CompileConfig config, const RunHooks &hooks = {}) {
    config.n_parts = 1;
    return run_rvqc(config, hooks);
}

struct FidelityRow {
    std::size_t step{0};
    double ideal_ansatz{0.0};
    double noisy_ansatz{0.0};
    double noisy_target{0.0};
};

struct FidelityReport {
    std::vector<FidelityRow> rows;
    FidelityRow final_row;
    bool complete{true};
};

/// Per-step fidelity triples plus the final-step summary.
inline FidelityReport fidelity_report(const RunRecord &record) {
    FidelityReport out;
    out.complete = !record.aborted;
    for (const auto &s : record.steps) {
        out.rows.push_back(
            {s.step, s.fidelity_ideal_ansatz, s.fidelity_noisy_ansatz, s.fidelity_noisy_target});
    }
    if (!out.rows.empty()) {
        out.final_row = out.rows.back();
    }
    return out;
}

} // namespace rvqc
