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
 * Cross-module invariant suite behind `rvqc verify`.
 *
 * The property set is fixed. The depolarizing channel under test can be
 * swapped out so that a broken channel can be shown to be caught.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"
#include "cost.hpp"
#include "density.hpp"
#include "driver.hpp"
#include "optim.hpp"
#include "statevec.hpp"
#include "testing/oracle.hpp"
#include "unitary.hpp"

namespace rvqc::verify {

using Channel = std::function<DensityMatrix(DensityMatrix, std::size_t, double)>;

struct Options {
    Channel depolarizing = [](DensityMatrix rho, std::size_t q, double p) {
        return apply_depolarizing(std::move(rho), q, p);
    };
    std::uint64_t seed{20240917};
};

struct PropertyResult {
    std::string name;
    bool passed{false};
    std::string detail;
};

namespace detail {

inline double max_abs(const Matrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

inline PropertyResult statevec_oracle(Rng &rng) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + rng.index(3);
        const Circuit c = random_circuit(n, 1 + rng.index(100), rng);
        const StateVector psi = oracle::random_state(n, rng);
        const auto got = oracle::to_vector(run_circuit(psi, c));
        const oracle::Vector want = oracle::circuit_matrix(c) * oracle::to_vector(psi);
        worst = std::max(worst, max_abs(got - want));
    }
    return {"statevector-matrix-oracle", worst <= 1e-10, "max |diff| " + fmt(worst)};
}

inline PropertyResult density_oracle(Rng &rng) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + rng.index(3);
        const Circuit c = random_circuit(n, 1 + rng.index(100), rng);
        const DensityMatrix rho = oracle::random_density(n, rng);
        const NoiseModel noiseless{};
        const Matrix u = oracle::circuit_matrix(c);
        worst = std::max(worst, max_abs(evolve_density(rho, c, noiseless).matrix() -
                                        u * rho.matrix() * u.adjoint()));
        const NoiseModel noisy{rng.uniform(0.0, 0.2), rng.uniform(0.0, 0.2), 0.0};
        worst = std::max(worst, max_abs(evolve_density(rho, c, noisy).matrix() -
                                        oracle::evolve(rho.matrix(), c, noisy)));
    }
    return {"density-matrix-oracle", worst <= 1e-10, "max |diff| " + fmt(worst)};
}

inline PropertyResult circuit_algebra(Rng &rng) {
    bool ok = true;
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + rng.index(3);
        const Circuit c = random_circuit(n, rng.index(60), rng);
        ok = ok && inverse(inverse(c)) == c;
        for (std::size_t parts = 1; parts <= std::max<std::size_t>(c.size(), 1); ++parts) {
            ok = ok && concat(split(c, parts)) == c;
        }
        worst = std::max(worst, max_abs(unitary_matrix(inverse(c)) - unitary_matrix(c).adjoint()));
    }
    return {"circuit-inverse-and-partition", ok && worst <= 1e-10,
            std::string(ok ? "" : "gate-list mismatch; ") + "inverse max |diff| " + fmt(worst)};
}

inline PropertyResult gradient_check(Rng &rng) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const AnsatzSpec spec{3, static_cast<std::size_t>(t % 3)};
        const CostContext ctx(spec, random_circuit(3, 20, rng),
                              t % 2 == 0 ? std::optional<ParamVector>{}
                                         : std::optional<ParamVector>{init_params(spec, rng)});
        const ParamVector theta = init_params(spec, rng);
        auto f = [&](const ParamVector &p) { return cost_exact(ctx, p); };
        const auto grad = parameter_shift_gradient(f, theta);
        constexpr double h = 1e-5;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            ParamVector up = theta;
            ParamVector dn = theta;
            up[i] += h;
            dn[i] -= h;
            const double fd = (f(up) - f(dn)) / (2 * h);
            worst = std::max(worst, std::abs(fd - grad[i]));
        }
    }
    return {"parameter-shift-vs-finite-difference", worst <= 1e-6, "max |diff| " + fmt(worst)};
}

inline PropertyResult channel_sanity(Rng &rng, const Channel &depolarize) {
    std::vector<std::string> failures;
    auto require = [&](bool cond, const std::string &what) {
        if (!cond && failures.size() < 3) {
            failures.push_back(what);
        }
    };
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng.index(3);
        const DensityMatrix rho = oracle::random_density(n, rng, t % 4 == 0);
        const double p = rng.uniform(0.0, 1.0);
        const std::size_t q = rng.index(n);
        require(check_density(depolarize(rho, q, p)).ok(), "depolarizing channel");
        const NoiseModel noise{rng.uniform(0.0, 0.1), rng.uniform(0.0, 0.1),
                               rng.uniform(0.0, 0.1)};
        const auto evolved = evolve_density(rho, random_circuit(n, 30, rng), noise);
        require(check_density(evolved).ok(), "evolve_density");
        const auto probs = measurement_probs(evolved, noise);
        double s = 0.0;
        for (double x : probs) {
            s += x;
            require(x >= 0.0, "measurement_probs nonnegative");
        }
        require(std::abs(s - 1.0) <= 1e-10, "measurement_probs normalization");
        const auto sigma = oracle::random_density(n, rng, t % 3 == 0);
        const double f = fidelity_general(rho, sigma);
        require(f >= 0.0 && f <= 1.0 + 1e-9, "fidelity bounds");
        require(std::abs(fidelity_general(rho, rho) - 1.0) <= 1e-9, "self fidelity");
    }
    const auto mixed = depolarize(density_from_state(zero_state(1)), 0, 0.75);
    require(max_abs(mixed.matrix() - DensityMatrix::maximally_mixed(1).matrix()) <= 1e-12,
            "depolarizing p=3/4 gives I/2");
    require(std::abs(fidelity_pure(zero_state(1), DensityMatrix::maximally_mixed(1)) - 0.5) <=
                1e-12,
            "F(|0>, I/2) = 0.5");
    std::string detail = failures.empty() ? "200 randomized inputs" : "violated:";
    for (const auto &f : failures) {
        detail += " [" + f + "]";
    }
    return {"channel-sanity", failures.empty(), detail};
}

inline PropertyResult cost_range_and_phase(Rng &rng) {
    double worst_range = 0.0;
    double worst_phase = 0.0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + rng.index(3);
        const AnsatzSpec spec{n, rng.index(3)};
        const Circuit ansatz = build_ansatz(spec, init_params(spec, rng));
        const Circuit target = random_circuit(n, 40, rng);
        // Z X Z X = -I
        const Circuit phase(n, {Gate::z(0), Gate::x(0), Gate::z(0), Gate::x(0)});
        for (double c : {cost_fisc_exact(ansatz, target), cost_fumc_exact(ansatz, target)}) {
            worst_range = std::max({worst_range, -c, c - 1.0});
        }
        worst_phase = std::max(
            {worst_phase,
             std::abs(cost_fisc_exact(concat(ansatz, phase), target) -
                      cost_fisc_exact(ansatz, target)),
             std::abs(cost_fumc_exact(concat(ansatz, phase), target) -
                      cost_fumc_exact(ansatz, target))});
    }
    return {"cost-range-and-global-phase", worst_range <= 1e-12 && worst_phase <= 1e-12,
            "range excess " + fmt(worst_range) + ", phase diff " + fmt(worst_phase)};
}

/// Target = N blocks V(t_{k-1})^dag V(t_k) with t_0 = 0, so each part is realizable.
inline Circuit realizable_chain(const AnsatzSpec &spec, std::size_t n_parts, Rng &rng) {
    ParamVector prev(spec.param_count(), 0.0);
    Circuit target(spec.n_qubits, "U");
    for (std::size_t k = 0; k < n_parts; ++k) {
        const ParamVector next = init_params(spec, rng);
        target = concat(target, concat(inverse(build_ansatz(spec, prev)), build_ansatz(spec, next)));
        prev = next;
    }
    return target;
}

inline PropertyResult telescoping(Rng &rng) {
    constexpr double eps = 1e-6;
    double worst_margin = 1.0;
    std::string detail;
    bool ok = true;
    for (std::size_t n_parts : {2U, 5U}) {
        const AnsatzSpec spec{2, 1};
        CompileConfig cfg;
        cfg.target = realizable_chain(spec, n_parts, rng);
        cfg.n_parts = n_parts;
        cfg.ansatz = spec;
        cfg.epochs_per_part = 2000;
        cfg.tolerance = eps;
        cfg.learning_rate = 0.1;
        cfg.train_backend = Backend::ExactIdeal;
        cfg.noise = {};
        cfg.master_seed = rng.index(1U << 30U);
        const auto rec = run_rvqc(cfg);
        const double bound = 1.0 - 10.0 * static_cast<double>(n_parts) * eps;
        const double f = rec.final_step().fidelity_ideal_ansatz;
        ok = ok && !rec.aborted && f >= bound;
        worst_margin = std::min(worst_margin, f - bound);
        detail += "N=" + std::to_string(n_parts) + " F=" + std::to_string(f) + " ";
    }
    return {"telescoping-soundness", ok, detail + "min margin " + fmt(worst_margin)};
}

inline PropertyResult depth_bound(Rng &rng) {
    const AnsatzSpec spec{3, 2};
    CompileConfig cfg;
    cfg.target = random_circuit(3, 500, rng);
    cfg.n_parts = 10;
    cfg.ansatz = spec;
    cfg.epochs_per_part = 3;
    cfg.n_shots = 256;
    cfg.train_backend = Backend::SampledNoisy;
    cfg.master_seed = 7;
    const auto rec = run_rvqc(cfg);
    std::size_t deepest = 0;
    std::size_t largest_part = 0;
    for (const auto &s : rec.steps) {
        deepest = std::max(deepest, s.max_cost_circuit_gates);
        largest_part = std::max(largest_part, s.part_gate_count);
    }
    const std::size_t bound = 2 * spec.gate_count() + largest_part;
    return {"cost-circuit-depth-bound", deepest <= bound && deepest < cfg.target.size(),
            "deepest " + std::to_string(deepest) + " <= " + std::to_string(bound) +
                " (target " + std::to_string(cfg.target.size()) + " gates)"};
}

} // namespace detail

/// Runs every property; the set and order are fixed.
inline std::vector<PropertyResult> run_suite(const Options &opts = {}) {
    std::vector<PropertyResult> out;
    std::uint64_t id = 0;
    auto run = [&](const char *name, auto &&prop) {
        Rng rng = Rng::substream(opts.seed, {++id});
        try {
            out.push_back(prop(rng));
        } catch (const std::exception &e) {
            out.push_back({name, false, std::string("exception: ") + e.what()});
        }
    };
    run("statevector-matrix-oracle", detail::statevec_oracle);
    run("density-matrix-oracle", detail::density_oracle);
    run("circuit-inverse-and-partition", detail::circuit_algebra);
    run("parameter-shift-vs-finite-difference", detail::gradient_check);
    run("channel-sanity", [&](Rng &r) { return detail::channel_sanity(r, opts.depolarizing); });
    run("cost-range-and-global-phase", detail::cost_range_and_phase);
    run("telescoping-soundness", detail::telescoping);
    run("cost-circuit-depth-bound", detail::depth_bound);
    return out;
}

} // namespace rvqc::verify
