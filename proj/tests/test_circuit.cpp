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
#include <map>

#include <gtest/gtest.h>

#include <rvqc/circuit.hpp>
#include <rvqc/statevec.hpp>
#include <rvqc/testing/oracle.hpp>
#include <rvqc/unitary.hpp>

using namespace rvqc;

namespace {

std::vector<std::size_t> sizes(const std::vector<Circuit> &parts) {
    std::vector<std::size_t> out;
    for (const auto &p : parts) {
        out.push_back(p.size());
    }
    return out;
}

Circuit sample_two_qubit_circuit() {
    return Circuit(2, {Gate::h(0), Gate::h(1), Gate::cnot(0, 1), Gate::x(0), Gate::y(1),
                       Gate::swap(0, 1), Gate::ry(0, kPi / 3), Gate::cnot(1, 0)});
}

} // namespace

TEST(CircuitType, RejectsInvalidGates) {
    Circuit c(2);
    EXPECT_THROW(c.push(Gate::h(2)), UsageError);
    EXPECT_THROW(c.push(Gate::swap(1, 1)), UsageError);
    EXPECT_THROW(c.push(Gate::rz(0, std::nan(""))), UsageError);
    EXPECT_THROW(Circuit(0), UsageError);
}

TEST(RandomCircuit, DeterministicForSeed) {
    Rng a(42);
    Rng b(42);
    EXPECT_EQ(random_circuit(5, 5000, a), random_circuit(5, 5000, b));
    Rng c(43);
    Rng d(42);
    EXPECT_FALSE(random_circuit(5, 50, c) == random_circuit(5, 50, d));
}

TEST(RandomCircuit, EmptyWhenNoGates) {
    Rng rng(1);
    EXPECT_TRUE(random_circuit(2, 0, rng).empty());
}

TEST(RandomCircuit, KindFrequenciesNearUniform) {
    // each kind count ~ Binomial(200, 1/9): sigma = sqrt(200 * 1/9 * 8/9)
    const double mean = 200.0 / 9.0;
    const double sigma = std::sqrt(200.0 * (1.0 / 9.0) * (8.0 / 9.0));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const auto c = random_circuit(3, 200, rng);
        std::map<GateKind, int> counts;
        for (const auto &g : c) {
            counts[g.kind] += 1;
        }
        for (auto k : kAllGateKinds) {
            EXPECT_LE(std::abs(counts[k] - mean), 5 * sigma) << kind_name(k);
        }
    }
}

TEST(RandomCircuit, GateShapeRules) {
    Rng rng(8);
    const auto c = random_circuit(4, 3000, rng);
    for (const auto &g : c) {
        if (is_rotation(g.kind)) {
            EXPECT_GE(g.angle, -kPi);
            EXPECT_LT(g.angle, kPi);
        }
        if (g.arity() == 2) {
            EXPECT_NE(g.qubits[0], g.qubits[1]);
        }
        EXPECT_FALSE(g.param_id.has_value());
    }
    const auto single = random_circuit(1, 500, rng);
    EXPECT_EQ(single.size(), 500U);
    EXPECT_TRUE(std::all_of(single.begin(), single.end(),
                            [](const Gate &g) { return g.arity() == 1; }));
}

TEST(Split, RemainderGoesToEarlierParts) {
    Rng rng(1);
    EXPECT_EQ(sizes(split(random_circuit(2, 7, rng), 3)), (std::vector<std::size_t>{3, 2, 2}));
    EXPECT_EQ(sizes(split(random_circuit(2, 6, rng), 3)), (std::vector<std::size_t>{2, 2, 2}));
    EXPECT_EQ(sizes(split(random_circuit(2, 2, rng), 4)),
              (std::vector<std::size_t>{1, 1, 0, 0}));
    EXPECT_THROW(split(Circuit(1), 0), UsageError);
}

TEST(Split, PartsMultiplyBackToWhole) {
    const auto c = sample_two_qubit_circuit();
    const auto parts = split(c, 3);
    EXPECT_EQ(concat(parts), c);
    // U = U_3 U_2 U_1 as matrices
    const auto whole = oracle::circuit_matrix(c);
    const oracle::Matrix product = oracle::circuit_matrix(parts[2]) * oracle::circuit_matrix(parts[1]) *
                         oracle::circuit_matrix(parts[0]);
    EXPECT_LT((whole - product).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Split, PartitionPropertyForAllN) {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto c = random_circuit(3, rng.index(40) + 1, rng);
        for (std::size_t n = 1; n <= c.size(); ++n) {
            const auto parts = split(c, n);
            ASSERT_EQ(parts.size(), n);
            EXPECT_EQ(concat(parts), c);
            const auto s = sizes(parts);
            EXPECT_LE(*std::max_element(s.begin(), s.end()) - *std::min_element(s.begin(), s.end()),
                      1U);
            EXPECT_TRUE(std::is_sorted(s.rbegin(), s.rend()));
        }
    }
}

TEST(Inverse, Examples) {
    EXPECT_EQ(inverse(Circuit(2, {Gate::h(0), Gate::cnot(0, 1)})),
              Circuit(2, {Gate::cnot(0, 1), Gate::h(0)}));
    EXPECT_EQ(inverse(Circuit(1, {Gate::ry(0, 0.7)})), Circuit(1, {Gate::ry(0, -0.7)}));
}

TEST(Inverse, MatrixIsAdjoint) {
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        const auto c = random_circuit(3, 50, rng);
        const auto u = oracle::circuit_matrix(c);
        EXPECT_LT((oracle::circuit_matrix(inverse(c)) - u.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_EQ(inverse(inverse(c)), c);
    }
}

TEST(Concat, Composition) {
    Rng rng(6);
    const auto a = random_circuit(3, 30, rng);
    const auto b = random_circuit(3, 25, rng);
    EXPECT_EQ(concat(a, Circuit(3)), a);
    EXPECT_EQ(concat(a, b).size(), a.size() + b.size());
    const auto psi = oracle::random_state(3, rng);
    const auto lhs = run_circuit(psi, concat(a, b));
    const auto rhs = run_circuit(run_circuit(psi, a), b);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        EXPECT_NEAR(std::abs(lhs[i] - rhs[i]), 0.0, 1e-14);
    }
    EXPECT_THROW(concat(a, Circuit(2)), UsageError);
}

TEST(BuildAnsatz, FiveQubitFourLayerShape) {
    const AnsatzSpec spec{5, 4};
    EXPECT_EQ(spec.param_count(), 50U);
    const auto c = build_ansatz(spec, ParamVector(50, 0.3));
    std::size_t rotations = 0;
    std::size_t cnots = 0;
    for (const auto &g : c) {
        rotations += is_rotation(g.kind) ? 1 : 0;
        cnots += g.kind == GateKind::CNOT ? 1 : 0;
    }
    EXPECT_EQ(rotations, 50U);
    EXPECT_EQ(cnots, 16U);
    EXPECT_EQ(c.size(), spec.gate_count());
}

TEST(BuildAnsatz, LayoutAndParameterOrder) {
    const AnsatzSpec spec{3, 1};
    EXPECT_EQ(spec.param_count(), 12U);
    std::vector<double> v(12);
    for (std::size_t i = 0; i < 12; ++i) {
        v[i] = 0.1 * static_cast<double>(i + 1);
    }
    const auto c = build_ansatz(spec, ParamVector(v));
    ASSERT_EQ(c.size(), 14U);
    // block 1: Ry q0..q2 (params 0..2), Rz q0..q2 (params 3..5)
    for (std::size_t q = 0; q < 3; ++q) {
        EXPECT_EQ(c[q], Gate::rotation(GateKind::Ry, q, v[q], q));
        EXPECT_EQ(c[3 + q], Gate::rotation(GateKind::Rz, q, v[3 + q], 3 + q));
    }
    EXPECT_EQ(c[6], Gate::cnot(0, 1));
    EXPECT_EQ(c[7], Gate::cnot(1, 2));
    for (std::size_t q = 0; q < 3; ++q) {
        EXPECT_EQ(c[8 + q], Gate::rotation(GateKind::Ry, q, v[6 + q], 6 + q));
        EXPECT_EQ(c[11 + q], Gate::rotation(GateKind::Rz, q, v[9 + q], 9 + q));
    }
}

TEST(BuildAnsatz, ShapeLawAndParamIds) {
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::size_t layers = 0; layers <= 4; ++layers) {
            const AnsatzSpec spec{n, layers};
            const auto c = build_ansatz(spec, ParamVector(spec.param_count()));
            EXPECT_EQ(c.size(), 2 * n * (layers + 1) + (n - 1) * layers);
            std::vector<int> seen(spec.param_count(), 0);
            for (const auto &g : c) {
                if (g.param_id) {
                    ASSERT_LT(*g.param_id, spec.param_count());
                    seen[*g.param_id] += 1;
                }
            }
            EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
        }
    }
}

TEST(BuildAnsatz, ZeroParametersWithoutLayersIsIdentity) {
    Rng rng(12);
    const auto c = build_ansatz({2, 0}, ParamVector(4, 0.0));
    for (int t = 0; t < 10; ++t) {
        const auto psi = oracle::random_state(2, rng);
        const auto out = run_circuit(psi, c);
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            EXPECT_NEAR(std::abs(out[i] - psi[i]), 0.0, 1e-12);
        }
    }
}

TEST(BuildAnsatz, LengthMismatch) {
    EXPECT_THROW(build_ansatz({2, 1}, ParamVector(7)), UsageError);
}

TEST(InitParams, RangeDeterminismAndMoments) {
    const AnsatzSpec spec{5, 4};
    Rng a(5);
    Rng b(5);
    const auto pa = init_params(spec, a);
    EXPECT_EQ(pa, init_params(spec, b));
    for (double x : pa) {
        EXPECT_GE(x, -kPi);
        EXPECT_LT(x, kPi);
    }
    // U[-pi, pi): mean 0, variance pi^2 / 3
    const AnsatzSpec big{50000, 0}; // 10^5 parameters
    Rng rng(77);
    const auto p = init_params(big, rng);
    ASSERT_EQ(p.size(), 100000U);
    double s = 0.0, s2 = 0.0;
    for (double x : p) {
        s += x;
        s2 += x * x;
    }
    const double mean = s / 1e5;
    const double var = s2 / 1e5 - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.03);
    EXPECT_NEAR(var, kPi * kPi / 3.0, 0.1);
}

TEST(UnitaryMatrix, Examples) {
    const auto id = unitary_matrix(Circuit(2));
    EXPECT_LT((id - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 0.0 + 1e-15);
    const auto h = unitary_matrix(Circuit(1, {Gate::h(0)}));
    const double s = 1.0 / std::sqrt(2.0);
    Matrix want(2, 2);
    want << s, s, s, -s;
    EXPECT_LT((h - want).cwiseAbs().maxCoeff(), 1e-15);
    Rng rng(9);
    const auto u = unitary_matrix(random_circuit(2, 20, rng));
    EXPECT_LT((u.adjoint() * u - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_THROW(unitary_matrix(Circuit(11)), ConfigError);
}

TEST(UnitaryMatrix, AgreesWithKroneckerOracle) {
    Rng rng(10);
    for (int t = 0; t < 20; ++t) {
        const auto c = random_circuit(1 + rng.index(3), 40, rng);
        EXPECT_LT((unitary_matrix(c) - oracle::circuit_matrix(c)).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(TextFormat, RoundTripIsBitExact) {
    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        const auto c = random_circuit(1 + rng.index(5), rng.index(300), rng);
        EXPECT_EQ(from_text(to_text(c)), c);
    }
}

TEST(TextFormat, LineSyntax) {
    const auto c = Circuit(3, {Gate::h(0), Gate::cnot(2, 1), Gate::rz(1, -0.25)});
    EXPECT_EQ(to_text(c), "# qubits 3\nH 0\nCNOT 2,1\nRZ 1,-0.25\n");
}

TEST(TextFormat, RejectsMalformedInput) {
    EXPECT_THROW(from_text("H 0\n"), UsageError); // no header
    EXPECT_THROW(from_text("# qubits 2\nFOO 0\n"), UsageError);
    EXPECT_THROW(from_text("# qubits 2\nCNOT 0\n"), UsageError);
    EXPECT_THROW(from_text("# qubits 2\nRY 0,abc\n"), UsageError);
    EXPECT_THROW(from_text("# qubits 2\nH 5\n"), UsageError);
}
