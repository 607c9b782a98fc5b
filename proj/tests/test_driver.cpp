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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include <rvqc/driver.hpp>
#include <rvqc/testing/oracle.hpp>

using namespace rvqc;

namespace {

CompileConfig exact_config(Circuit target, AnsatzSpec spec, std::size_t parts,
                           std::size_t epochs, std::uint64_t seed) {
    CompileConfig cfg;
    cfg.target = std::move(target);
    cfg.ansatz = spec;
    cfg.n_parts = parts;
    cfg.epochs_per_part = epochs;
    cfg.learning_rate = 0.1;
    cfg.train_backend = Backend::ExactIdeal;
    cfg.noise = {};
    cfg.master_seed = seed;
    return cfg;
}

Circuit realizable_chain(const AnsatzSpec &spec, std::size_t parts, Rng &rng) {
    ParamVector prev(spec.param_count(), 0.0);
    Circuit target(spec.n_qubits);
    for (std::size_t k = 0; k < parts; ++k) {
        const auto next = init_params(spec, rng);
        target = concat(target, concat(inverse(build_ansatz(spec, prev)), build_ansatz(spec, next)));
        prev = next;
    }
    return target;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

bool same_record(const RunRecord &a, const RunRecord &b) {
    if (a.steps.size() != b.steps.size() || a.aborted != b.aborted) {
        return false;
    }
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        const auto &x = a.steps[i];
        const auto &y = b.steps[i];
        if (x.epochs.size() != y.epochs.size() || x.best_epoch != y.best_epoch ||
            !(x.best_params == y.best_params) ||
            x.fidelity_ideal_ansatz != y.fidelity_ideal_ansatz ||
            x.fidelity_noisy_ansatz != y.fidelity_noisy_ansatz ||
            x.fidelity_noisy_target != y.fidelity_noisy_target ||
            x.max_cost_circuit_gates != y.max_cost_circuit_gates) {
            return false;
        }
        for (std::size_t e = 0; e < x.epochs.size(); ++e) {
            if (x.epochs[e].train_cost != y.epochs[e].train_cost ||
                x.epochs[e].ideal_cost != y.epochs[e].ideal_cost) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

TEST(RunRvqc, IdentityTargetConvergesImmediately) {
    auto cfg = exact_config(Circuit(2), {2, 0}, 1, 50, 1);
    cfg.init_override = ParamVector(4, 0.0);
    const auto rec = run_rvqc(cfg);
    ASSERT_EQ(rec.steps.size(), 1U);
    const auto &s = rec.final_step();
    EXPECT_EQ(s.epochs.size(), 1U);
    EXPECT_EQ(s.best_epoch, 0U);
    EXPECT_EQ(s.epochs[0].train_cost, 0.0);
    EXPECT_NEAR(s.fidelity_ideal_ansatz, 1.0, 1e-15);
}

TEST(RunRvqc, RealizableTargetIdealConvergence) {
    const AnsatzSpec spec{2, 1};
    int converged = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed * 31);
        const auto rec =
            run_rvqc(exact_config(build_ansatz(spec, init_params(spec, rng)), spec, 1, 500, seed));
        const auto &s = rec.final_step();
        converged += s.epochs[s.best_epoch].ideal_cost < 1e-2 ? 1 : 0;
    }
    EXPECT_GE(converged, 4);
}

TEST(RunVqc, EqualsSinglePartRvqc) {
    Rng rng(2);
    auto cfg = exact_config(random_circuit(2, 40, rng), {2, 1}, 1, 20, 9);
    cfg.train_backend = Backend::SampledNoisy;
    cfg.noise = {1e-3, 1e-2, 2e-2};
    cfg.n_shots = 256;
    auto multi = cfg;
    multi.n_parts = 4; // ignored by run_vqc
    EXPECT_TRUE(same_record(run_rvqc(cfg), run_vqc(multi)));
}

TEST(RunRvqc, EpochLogLengthAndToleranceStop) {
    Rng rng(3);
    auto cfg = exact_config(random_circuit(2, 30, rng), {2, 1}, 3, 25, 4);
    const auto rec = run_rvqc(cfg);
    for (const auto &s : rec.steps) {
        EXPECT_EQ(s.epochs.size(), 25U);
        for (std::size_t e = 0; e < s.epochs.size(); ++e) {
            EXPECT_EQ(s.epochs[e].epoch, e);
        }
    }
    cfg.tolerance = 0.5;
    const auto early = run_rvqc(cfg);
    for (const auto &s : early.steps) {
        EXPECT_LE(s.epochs.size(), 25U);
        if (s.epochs.size() < 25U) {
            EXPECT_LE(s.epochs.back().train_cost, 0.5);
        }
    }
}

TEST(RunRvqc, BestEpochContract) {
    Rng rng(4);
    auto cfg = exact_config(random_circuit(3, 60, rng), {3, 2}, 3, 30, 5);
    cfg.train_backend = Backend::SampledNoisy;
    cfg.noise = {1e-3, 1e-2, 2e-2};
    cfg.n_shots = 512;
    const auto rec = run_rvqc(cfg);
    const auto parts = split(cfg.target, 3);
    std::optional<ParamVector> prev;
    for (std::size_t k = 0; k < rec.steps.size(); ++k) {
        const auto &s = rec.steps[k];
        double min_cost = s.epochs[0].train_cost;
        std::size_t argmin = 0;
        for (const auto &e : s.epochs) {
            if (e.train_cost < min_cost) {
                min_cost = e.train_cost;
                argmin = e.epoch;
            }
        }
        EXPECT_EQ(s.best_epoch, argmin);
        const double replay = cost_exact(CostContext(cfg.ansatz, parts[k], prev), s.best_params);
        EXPECT_NEAR(replay, s.epochs[s.best_epoch].ideal_cost, 1e-12);
        for (double f : {s.fidelity_ideal_ansatz, s.fidelity_noisy_ansatz, s.fidelity_noisy_target}) {
            EXPECT_GE(f, 0.0);
            EXPECT_LE(f, 1.0);
        }
        prev = s.best_params;
    }
}

TEST(RunRvqc, DeterministicForSeed) {
    Rng rng(5);
    auto cfg = exact_config(random_circuit(3, 80, rng), {3, 1}, 4, 10, 77);
    cfg.train_backend = Backend::SampledNoisy;
    cfg.noise = {1e-3, 1e-2, 2e-2};
    cfg.n_shots = 256;
    EXPECT_TRUE(same_record(run_rvqc(cfg), run_rvqc(cfg)));
    auto other = cfg;
    other.master_seed = 78;
    EXPECT_FALSE(same_record(run_rvqc(cfg), run_rvqc(other)));
}

TEST(RunRvqc, TelescopingSoundness) {
    constexpr double eps = 1e-6;
    const AnsatzSpec spec{2, 1};
    for (std::size_t parts = 1; parts <= 5; ++parts) {
        Rng rng(100 + parts);
        auto cfg = exact_config(realizable_chain(spec, parts, rng), spec, parts, 2000, parts);
        cfg.tolerance = eps;
        const auto rec = run_rvqc(cfg);
        ASSERT_FALSE(rec.aborted);
        EXPECT_GE(rec.final_step().fidelity_ideal_ansatz,
                  1.0 - 10.0 * static_cast<double>(parts) * eps)
            << "N=" << parts;
    }
}

TEST(RunRvqc, CostCircuitDepthIndependentOfTargetDepth) {
    const AnsatzSpec spec{3, 2};
    for (std::size_t gates : {100U, 1000U}) {
        Rng rng(gates);
        auto cfg = exact_config(random_circuit(3, gates, rng), spec, gates / 20, 2, 3);
        cfg.train_backend = Backend::SampledIdeal;
        cfg.n_shots = 64;
        const auto rec = run_rvqc(cfg);
        for (const auto &s : rec.steps) {
            EXPECT_LE(s.max_cost_circuit_gates, 2 * spec.gate_count() + s.part_gate_count);
            EXPECT_LE(s.max_cost_circuit_gates, 2 * spec.gate_count() + 20);
        }
    }
}

TEST(RunRvqc, AbortsOnNonFiniteParameters) {
    Rng rng(6);
    auto cfg = exact_config(random_circuit(2, 10, rng), {2, 1}, 2, 20, 1);
    cfg.learning_rate = 1e308;
    const auto rec = run_rvqc(cfg);
    EXPECT_TRUE(rec.aborted);
    EXPECT_FALSE(rec.abort_reason.empty());
}

TEST(RunRvqc, RejectsInvalidConfig) {
    auto cfg = exact_config(Circuit(2), {3, 1}, 1, 10, 1);
    EXPECT_THROW(run_rvqc(cfg), ConfigError);
    cfg = exact_config(Circuit(2), {2, 1}, 0, 10, 1);
    EXPECT_THROW(run_rvqc(cfg), ConfigError);
    cfg = exact_config(Circuit(2), {2, 1}, 1, 10, 1);
    cfg.tolerance = 1.5;
    EXPECT_THROW(run_rvqc(cfg), ConfigError);
}

TEST(RunVqc, NoisyTrainingDoesNotBeatIdealTraining) {
    std::vector<double> ideal_trained, noisy_trained;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Rng rng(seed);
        auto cfg = exact_config(random_circuit(3, 200, rng), {3, 3}, 1, 150, seed);
        const auto a = run_vqc(cfg).final_step();
        ideal_trained.push_back(a.epochs[a.best_epoch].ideal_cost);
        cfg.train_backend = Backend::SampledNoisy;
        cfg.noise = {1e-3, 1e-2, 2e-2};
        cfg.n_shots = 512;
        const auto b = run_vqc(cfg).final_step();
        noisy_trained.push_back(b.epochs[b.best_epoch].ideal_cost);
    }
    EXPECT_GE(median(noisy_trained), median(ideal_trained));
}

TEST(FidelityReport, PerfectCompilationEveryStep) {
    const AnsatzSpec spec{2, 1};
    Rng rng(7);
    const auto target = realizable_chain(spec, 3, rng);
    // realizable parts: exact training reaches the tight tolerance
    auto cfg = exact_config(target, spec, 3, 2000, 2);
    cfg.tolerance = 1e-10;
    const auto rep = fidelity_report(run_rvqc(cfg));
    ASSERT_EQ(rep.rows.size(), 3U);
    for (const auto &r : rep.rows) {
        EXPECT_NEAR(r.ideal_ansatz, 1.0, 1e-8);
    }
    EXPECT_EQ(rep.final_row.step, 3U);
    EXPECT_TRUE(rep.complete);
}

TEST(FidelityReport, NoiselessNoisyAnsatzEqualsIdeal) {
    Rng rng(8);
    auto cfg = exact_config(random_circuit(3, 60, rng), {3, 2}, 3, 15, 3);
    const auto rep = fidelity_report(run_rvqc(cfg));
    for (const auto &r : rep.rows) {
        EXPECT_NEAR(r.noisy_ansatz, r.ideal_ansatz, 1e-9);
        EXPECT_NEAR(r.noisy_target, 1.0, 1e-9);
    }
}

TEST(FidelityReport, NoisyTargetBaselineDecaysWithDepth) {
    std::vector<double> medians;
    for (std::size_t gates : {50U, 200U, 800U}) {
        std::vector<double> f;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            Rng rng(seed * 1000 + gates);
            auto cfg = exact_config(random_circuit(3, gates, rng), {3, 1}, 1, 1, seed);
            cfg.noise = {1e-3, 1e-2, 2e-2};
            f.push_back(fidelity_report(run_rvqc(cfg)).final_row.noisy_target);
        }
        medians.push_back(median(f));
    }
    EXPECT_GT(medians[0], medians[1]);
    EXPECT_GT(medians[1], medians[2]);
}
